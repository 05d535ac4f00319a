"""Split a measurement graph into GHZ stars and linear chains joined by fusions.

1. While some node has more than two remaining edges, take the one with the
   most (ties: lowest id) and cut out its whole star as a GHZ subgraph.
2. Peel the leftover paths and cycles into LINEAR subgraphs.
3. Every node that now occurs in several subgraphs is glued back together by
   Type-1 fusions, one per extra occurrence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .mgraph import MGraph
from .sim.statevector import StateVector, ZeroBranchError, fidelity, fuse_type1, graph_state

GHZ = "GHZ"
LINEAR = "LINEAR"
SIM_NODE_CAP = 12
FIDELITY_TOL = 1e-9

Occurrence = tuple[int, int]  # (subgraph index, position in subgraph)


@dataclass(frozen=True)
class Subgraph:
    """``nodes`` is root-then-leaves for GHZ and end-to-end for LINEAR.

    A LINEAR built from a cycle starts and ends on the same node.
    """

    kind: str
    nodes: tuple[int, ...]

    def edges(self) -> list[tuple[int, int]]:
        """Edges by position pairs."""
        k = len(self.nodes)
        if self.kind == GHZ:
            return [(0, i) for i in range(1, k)]
        return [(i, i + 1) for i in range(k - 1)]

    def node_edges(self) -> list[tuple[int, int]]:
        return [tuple(sorted((self.nodes[a], self.nodes[b]))) for a, b in self.edges()]


@dataclass(frozen=True)
class Fusion:
    node: int
    keep: Occurrence
    consume: Occurrence


@dataclass
class DecompositionPlan:
    subgraphs: list[Subgraph] = field(default_factory=list)
    fusions: list[Fusion] = field(default_factory=list)

    @property
    def photon_count(self) -> int:
        return sum(len(s.nodes) for s in self.subgraphs)

    @property
    def fusion_count(self) -> int:
        return len(self.fusions)

    @property
    def ghz_count(self) -> int:
        return sum(1 for s in self.subgraphs if s.kind == GHZ)

    @property
    def linear_count(self) -> int:
        return sum(1 for s in self.subgraphs if s.kind == LINEAR)

    def occurrences(self) -> dict[int, list[Occurrence]]:
        occ: dict[int, list[Occurrence]] = {}
        for i, s in enumerate(self.subgraphs):
            for p, v in enumerate(s.nodes):
                occ.setdefault(v, []).append((i, p))
        return occ

    def to_dict(self) -> dict:
        return {
            "subgraphs": [{"kind": s.kind, "nodes": list(s.nodes)} for s in self.subgraphs],
            "fusions": [
                {"node": f.node, "keep": list(f.keep), "consume": list(f.consume)} for f in self.fusions
            ],
            "photon_count": self.photon_count,
            "fusion_count": self.fusion_count,
            "ghz_count": self.ghz_count,
            "linear_count": self.linear_count,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, obj: dict) -> "DecompositionPlan":
        subs = [Subgraph(s["kind"], tuple(int(v) for v in s["nodes"])) for s in obj["subgraphs"]]
        fus = [Fusion(int(f["node"]), tuple(f["keep"]), tuple(f["consume"])) for f in obj["fusions"]]
        return cls(subs, fus)


def _adjacency(nodes: Iterable[int], edges: Iterable[tuple[int, int]]) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in nodes}
    for a, b in edges:
        if a == b:
            raise ValueError(f"self-loop on node {a}")
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    return adj


def _drop(adj: dict[int, set[int]], a: int, b: int) -> None:
    adj[a].discard(b)
    adj[b].discard(a)


def _walk(adj: dict[int, set[int]], start: int) -> list[int]:
    path = [start]
    while adj[path[-1]]:
        cur = path[-1]
        nxt = min(adj[cur])
        _drop(adj, cur, nxt)
        path.append(nxt)
    return path


def decompose_graph(nodes: Iterable[int], edges: Iterable[tuple[int, int]]) -> DecompositionPlan:
    nodes = sorted(set(nodes))
    adj = _adjacency(nodes, edges)
    nodes = sorted(adj)
    plan = DecompositionPlan()
    isolated = [v for v in nodes if not adj[v]]

    while True:
        deg = {v: len(adj[v]) for v in nodes}
        roots = [v for v in nodes if deg[v] > 2]
        if not roots:
            break
        root = min(roots, key=lambda v: (-deg[v], v))
        leaves = sorted(adj[root])
        plan.subgraphs.append(Subgraph(GHZ, (root, *leaves)))
        for w in leaves:
            _drop(adj, root, w)

    while any(adj[v] for v in nodes):
        ends = [v for v in nodes if len(adj[v]) == 1]
        # no endpoint left means only cycles remain: cut at the lowest id
        start = ends[0] if ends else next(v for v in nodes if adj[v])
        plan.subgraphs.append(Subgraph(LINEAR, tuple(_walk(adj, start))))

    for v in isolated:
        plan.subgraphs.append(Subgraph(LINEAR, (v,)))

    for v, occ in sorted(plan.occurrences().items()):
        for o in occ[1:]:
            plan.fusions.append(Fusion(v, occ[0], o))
    return plan


def decompose(m: MGraph) -> DecompositionPlan:
    return decompose_graph(m.vertices(), m.edges)


# ---------------------------------------------------------------------------
# verification


def reconstruction_errors(plan: DecompositionPlan, nodes: Iterable[int], edges: Iterable[tuple[int, int]]) -> list[str]:
    errs: list[str] = []
    nodes = set(nodes)
    want = sorted(tuple(sorted(e)) for e in edges)
    got = sorted(e for s in plan.subgraphs for e in s.node_edges())
    if got != want:
        errs.append("subgraph edges do not reproduce the graph edge set")
    for i, s in enumerate(plan.subgraphs):
        if s.kind not in (GHZ, LINEAR):
            errs.append(f"subgraph {i} has unknown kind {s.kind!r}")
        if s.kind == GHZ and len(s.nodes) < 3:
            errs.append(f"GHZ subgraph {i} has fewer than 3 nodes")
        if s.kind == LINEAR and not s.nodes:
            errs.append(f"LINEAR subgraph {i} is empty")
    occ = plan.occurrences()
    if set(occ) != nodes:
        errs.append("subgraph nodes differ from graph nodes")
    glued: dict[int, set[Occurrence]] = {v: {o[0]} for v, o in occ.items()}
    for f in plan.fusions:
        have = occ.get(f.node, [])
        if f.keep not in have or f.consume not in have or f.keep == f.consume:
            errs.append(f"fusion {f} references an invalid occurrence")
            continue
        if f.keep != have[0]:
            errs.append(f"fusion {f} must keep the first occurrence")
        if f.consume in glued[f.node] - {have[0]}:
            errs.append(f"fusion {f} consumes an occurrence twice")
        glued[f.node].add(f.consume)
    for v, o in occ.items():
        if glued[v] != set(o):
            errs.append(f"occurrences of node {v} are not all fused")
    if plan.fusion_count != sum(len(o) - 1 for o in occ.values()):
        errs.append("fusion count does not match repeated occurrences")
    return errs


def simulate_plan(plan: DecompositionPlan, nodes: Iterable[int]) -> StateVector:
    """Build every subgraph state and apply the fusions as soon as possible.

    Returns the fused register ordered by ascending node id.
    """
    nodes = sorted(set(nodes))
    state = StateVector(0, np.ones(1, dtype=complex))
    labels: list[Occurrence] = []
    pending = list(plan.fusions)
    for i, s in enumerate(plan.subgraphs):
        state = state.tensor(graph_state(s.edges(), len(s.nodes)))
        labels += [(i, p) for p in range(len(s.nodes))]
        still = []
        for f in pending:
            if f.keep in labels and f.consume in labels:
                qb = labels.index(f.consume)
                state = fuse_type1(state, labels.index(f.keep), qb)
                del labels[qb]
            else:
                still.append(f)
        pending = still
    if pending:
        raise ValueError("fusions reference occurrences outside the plan")
    owner: dict[int, int] = {}
    for q, (i, p) in enumerate(labels):
        v = plan.subgraphs[i].nodes[p]
        if v in owner:
            raise ValueError(f"node {v} still has several photons after fusion")
        owner[v] = q
    if sorted(owner) != nodes:
        raise ValueError("fused register does not cover the graph nodes")
    return state.permute([owner[v] for v in nodes])


def plan_fidelity(plan: DecompositionPlan, nodes: Iterable[int], edges: Iterable[tuple[int, int]]) -> float:
    nodes = sorted(set(nodes))
    idx = {v: i for i, v in enumerate(nodes)}
    target = graph_state([(idx[a], idx[b]) for a, b in edges], len(nodes))
    try:
        got = simulate_plan(plan, nodes)
    except (ValueError, ZeroBranchError):
        return 0.0
    return fidelity(got, target)


def verify_plan_graph(
    plan: DecompositionPlan,
    nodes: Iterable[int],
    edges: Iterable[tuple[int, int]],
    sim_cap: int = SIM_NODE_CAP,
) -> bool:
    nodes, edges = sorted(set(nodes)), [tuple(e) for e in edges]
    if reconstruction_errors(plan, nodes, edges):
        return False
    if len(nodes) <= sim_cap:
        return plan_fidelity(plan, nodes, edges) >= 1 - FIDELITY_TOL
    return True


def verify_plan(plan: DecompositionPlan, m: MGraph, sim_cap: int = SIM_NODE_CAP) -> bool:
    """Edge reconstruction, plus a fusion simulation for graphs up to ``sim_cap`` nodes."""
    return verify_plan_graph(plan, m.vertices(), m.edges, sim_cap)
