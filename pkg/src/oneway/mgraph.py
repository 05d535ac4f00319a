"""Measurement graphs: the compiler's pattern-level IR.

A vertex is a photon/qubit prepared in ``|+>``; edges are CZ links. Every
non-output vertex is measured in the equatorial basis ``B(alpha)``. The sign
convention ties a gate or spider phase ``theta`` to ``alpha = -theta``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from . import phase as ph
from .frontend import CZ, HRZ, NativeSeq
from .phase import Phase
from .zx.diagram import EType, VType, ZXDiagram, graph_like_violations

ROLES = ("input", "body", "output")


class MGraphError(ValueError):
    pass


class NotGraphLikeError(ValueError):
    pass


@dataclass
class MGraph:
    """Measurement graph.

    ``angles[v]`` is ``None`` exactly for outputs. A vertex that is both an
    input and an output has role ``"output"`` and also appears in ``inputs``.
    ``inputs``/``outputs`` list the open legs in wire order.

    ``corrections[v] = (theta, hadamard)`` puts the fixed local unitary
    ``H^hadamard Rz(theta)`` on output ``v`` after the pattern has run (wave
    plates on the output photon). Missing entries mean identity.
    """

    angles: dict[int, Phase | None] = field(default_factory=dict)
    roles: dict[int, str] = field(default_factory=dict)
    edges: set[tuple[int, int]] = field(default_factory=set)
    order: list[int] = field(default_factory=list)
    inputs: list[int] = field(default_factory=list)
    outputs: list[int] = field(default_factory=list)
    rows: dict[int, int] = field(default_factory=dict)
    corrections: dict[int, tuple[Phase, bool]] = field(default_factory=dict)

    # -- construction helpers ---------------------------------------------

    def add_vertex(self, v: int, angle: Phase | None, role: str) -> None:
        if v in self.roles:
            raise MGraphError(f"duplicate vertex {v}")
        self.angles[v] = angle
        self.roles[v] = role

    def toggle_edge(self, a: int, b: int) -> None:
        e = (min(a, b), max(a, b))
        if e in self.edges:
            self.edges.remove(e)
        else:
            self.edges.add(e)

    # -- queries ----------------------------------------------------------

    def vertices(self) -> list[int]:
        return sorted(self.roles)

    def measured(self) -> list[int]:
        return [v for v in self.vertices() if self.roles[v] != "output"]

    def neighbors(self, v: int) -> list[int]:
        return sorted({b if a == v else a for a, b in self.edges if v in (a, b)})

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.roles}
        for a, b in sorted(self.edges):
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def num_vertices(self) -> int:
        return len(self.roles)

    def validate(self) -> None:
        for v, r in self.roles.items():
            if r not in ROLES:
                raise MGraphError(f"vertex {v} has unknown role {r!r}")
            if (r == "output") != (self.angles[v] is None):
                raise MGraphError(f"vertex {v}: outputs carry no angle, measured vertices need one")
        for a, b in self.edges:
            if a == b or a not in self.roles or b not in self.roles:
                raise MGraphError(f"bad edge ({a}, {b})")
        if sorted(self.order) != self.measured():
            raise MGraphError("order must list every measured vertex exactly once")
        if sorted(self.outputs) != sorted(v for v, r in self.roles.items() if r == "output"):
            raise MGraphError("outputs list does not match output roles")
        if len(set(self.inputs)) != len(self.inputs) or any(v not in self.roles for v in self.inputs):
            raise MGraphError("inputs must be distinct vertices")
        for v, r in self.roles.items():
            if r == "input" and v not in self.inputs:
                raise MGraphError(f"input vertex {v} missing from inputs")
        for v in self.corrections:
            if self.roles.get(v) != "output":
                raise MGraphError(f"correction on non-output vertex {v}")

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        verts = []
        for v in self.vertices():
            entry = {"id": v, "role": self.roles[v]}
            entry.update(ph.to_json(self.angles[v]))
            if v in self.corrections:
                theta, had = self.corrections[v]
                entry["correction"] = {"hadamard": had, **ph.to_json(theta)}
            verts.append(entry)
        return {
            "vertices": verts,
            "edges": [list(e) for e in sorted(self.edges)],
            "order": list(self.order),
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, obj: dict) -> "MGraph":
        m = cls()
        try:
            for entry in obj["vertices"]:
                m.add_vertex(int(entry["id"]), ph.from_json(entry), entry["role"])
                if "correction" in entry:
                    c = entry["correction"]
                    m.corrections[int(entry["id"])] = (ph.from_json(c), bool(c["hadamard"]))
            for a, b in obj["edges"]:
                a, b = int(a), int(b)
                m.edges.add((min(a, b), max(a, b)))
            m.order = [int(v) for v in obj["order"]]
            m.inputs = [int(v) for v in obj.get("inputs", [])]
            m.outputs = [int(v) for v in obj.get("outputs", [])]
        except (KeyError, TypeError) as exc:
            raise MGraphError(f"malformed m-graph JSON: {exc}") from exc
        m.validate()
        return m

    @classmethod
    def from_json(cls, text: str) -> "MGraph":
        return cls.from_dict(json.loads(text))


def build_mgraph(s: NativeSeq) -> MGraph:
    """Grid m-graph of a native sequence: one row per qubit.

    ``HRZ(q, theta)`` measures the current frontier of row ``q`` at
    ``alpha = -theta`` and appends a fresh vertex; ``CZ`` toggles a vertical
    edge between frontiers. Ids follow creation order.
    """
    m = MGraph()
    n = s.num_qubits
    frontier = list(range(n))
    for q in range(n):
        m.add_vertex(q, None, "output")
        m.rows[q] = q
    m.inputs = list(range(n))
    nxt = n
    for op in s.ops:
        if isinstance(op, HRZ):
            f = frontier[op.qubit]
            m.angles[f] = ph.neg(ph.normalize(op.angle))
            m.roles[f] = "input" if f < n else "body"
            m.order.append(f)
            m.add_vertex(nxt, None, "output")
            m.rows[nxt] = op.qubit
            m.edges.add((f, nxt))
            frontier[op.qubit] = nxt
            nxt += 1
        elif isinstance(op, CZ):
            m.toggle_edge(frontier[op.a], frontier[op.b])
        else:
            raise TypeError(f"unknown native op {op!r}")
    m.outputs = list(frontier)
    return m


def as_graph_like(m: MGraph) -> ZXDiagram:
    """Graph-like diagram of ``m``; spider ids equal vertex ids.

    The scalar is left at 1: a pattern only fixes its map up to scale.
    """
    d = ZXDiagram()
    for v in m.vertices():
        a = m.angles[v]
        theta, _ = m.corrections.get(v, (Fraction(0), False))
        d.add_vertex(VType.Z, theta if a is None else ph.neg(a), vid=v)
    for a, b in sorted(m.edges):
        d.add_edge(a, b, EType.HADAMARD)
    for v in m.inputs:
        d.add_edge(d.add_input(), v)
    for v in m.outputs:
        had = m.corrections.get(v, (0, False))[1]
        d.add_edge(v, d.add_output(), EType.HADAMARD if had else EType.PLAIN)
    return d


def _detach(d: ZXDiagram, v: int, b: int) -> None:
    """Move boundary ``b`` off spider ``v`` onto a fresh phase-0 spider.

    ``b - v`` becomes ``b - s(0) -H- t(0) -H- v``, which is exact.
    """
    t0 = d.remove_edge(v, b)
    s = d.add_vertex(VType.Z)
    t = d.add_vertex(VType.Z)
    d.add_edge(b, s, t0)
    d.add_edge(s, t, EType.HADAMARD)
    d.add_edge(t, v, EType.HADAMARD)


def pattern_ready(d: ZXDiagram) -> ZXDiagram:
    """Exact rewrite so each boundary maps onto its own pattern vertex.

    Afterwards every input edge is plain and a spider holds at most one
    input and at most one output. Output spiders keep their phase and their
    output edge type; :func:`extract_pattern` reads both as the output
    correction. Bare wires get a spider of their own.
    """
    g = d.copy()
    for b in list(g.inputs):
        (w,) = g.neighbors(b)
        et = g.edge_type(b, w)
        if g.is_boundary(w):
            g.remove_edge(b, w)
            s = g.add_vertex(VType.Z)
            g.add_edge(b, s)
            g.add_edge(s, w, et)
        elif et == EType.HADAMARD:
            g.remove_edge(b, w)
            s = g.add_vertex(VType.Z)
            g.add_edge(b, s)
            g.add_edge(s, w, EType.HADAMARD)
    for v in g.spiders():
        bs = g.boundary_neighbors(v)
        ins = [b for b in bs if b in g.inputs]
        outs = [b for b in bs if b in g.outputs]
        for b in ins[1:]:
            _detach(g, v, b)
        for b in outs[1:]:
            _detach(g, v, b)
    return g


def _bfs_order(m: MGraph) -> list[int]:
    adj = m.adjacency()
    dist = {v: 0 for v in m.inputs}
    queue = deque(sorted(m.inputs))
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    inf = len(adj) + 1
    return sorted(m.measured(), key=lambda v: (dist.get(v, inf), v))


def extract_pattern(d: ZXDiagram) -> MGraph:
    """Read a graph-like diagram as a measurement pattern (``alpha = -phase``).

    Execution order: breadth-first distance from the inputs, ties by id.
    """
    errs = graph_like_violations(d)
    if errs:
        raise NotGraphLikeError("diagram is not graph-like: " + "; ".join(errs[:5]))
    g = pattern_ready(d)
    owner = {b: g.neighbors(b)[0] for b in g.inputs + g.outputs}
    out_sp = {owner[b] for b in g.outputs}
    in_sp = {owner[b] for b in g.inputs}
    m = MGraph()
    for v in g.spiders():
        if v in out_sp:
            m.add_vertex(v, None, "output")
            (b,) = [b for b in g.boundary_neighbors(v) if b in g.outputs]
            had = g.edge_type(v, b) == EType.HADAMARD
            if had or not ph.is_zero(g.phase(v)):
                m.corrections[v] = (g.phase(v), had)
        else:
            m.add_vertex(v, ph.neg(g.phase(v)), "input" if v in in_sp else "body")
    for u, v, _ in g.edges():
        if not g.is_boundary(u) and not g.is_boundary(v):
            m.edges.add((u, v))
    m.inputs = [owner[b] for b in g.inputs]
    m.outputs = [owner[b] for b in g.outputs]
    m.order = _bfs_order(m)
    m.validate()
    return m
