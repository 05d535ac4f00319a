"""Open ZX diagrams with an explicit global scalar.

Spider semantics (no normalization):

    Z(a) = |0...0><0...0| + e^{ia} |1...1><1...1|
    X(a) = |+...+><+...+| + e^{ia} |-...-><-...-|

A Hadamard edge inserts the normalized 2x2 Hadamard matrix. The diagram is a
multigraph; graph-like diagrams additionally keep at most one edge per pair.
Every rewrite in this package updates ``scalar`` so that
``evaluate(d)`` is preserved exactly, not just up to a factor.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Iterator

from .. import phase as ph
from ..frontend import CZ, HRZ, NativeSeq
from ..phase import Phase

SQRT2 = math.sqrt(2.0)


class VType(enum.IntEnum):
    BOUNDARY = 0
    Z = 1
    X = 2


class EType(enum.IntEnum):
    PLAIN = 1
    HADAMARD = 2

    def compose(self, other: "EType") -> "EType":
        """Edge type of two wires joined through a phase-free 2-leg spider."""
        return EType.PLAIN if self == other else EType.HADAMARD

    def toggled(self) -> "EType":
        return EType.PLAIN if self == EType.HADAMARD else EType.HADAMARD


class ZXDiagram:
    def __init__(self) -> None:
        self._type: dict[int, VType] = {}
        self._phase: dict[int, Phase] = {}
        self._adj: dict[int, dict[int, list[EType]]] = {}
        self.inputs: list[int] = []
        self.outputs: list[int] = []
        self.scalar: complex = 1.0
        self._next = 0

    # -- construction -----------------------------------------------------

    def add_vertex(self, vtype: VType = VType.Z, phase: Phase = Fraction(0), vid: int | None = None) -> int:
        if vid is None:
            vid = self._next
        if vid in self._type:
            raise ValueError(f"vertex {vid} already exists")
        self._next = max(self._next, vid + 1)
        self._type[vid] = VType(vtype)
        self._phase[vid] = ph.normalize(phase) if vtype != VType.BOUNDARY else Fraction(0)
        self._adj[vid] = {}
        return vid

    def add_input(self) -> int:
        v = self.add_vertex(VType.BOUNDARY)
        self.inputs.append(v)
        return v

    def add_output(self) -> int:
        v = self.add_vertex(VType.BOUNDARY)
        self.outputs.append(v)
        return v

    def add_edge(self, u: int, v: int, etype: EType = EType.PLAIN) -> None:
        """Add one more edge (multigraph semantics, no simplification)."""
        self._adj[u].setdefault(v, []).append(EType(etype))
        if u != v:
            self._adj[v].setdefault(u, []).append(EType(etype))

    def remove_edge(self, u: int, v: int, etype: EType | None = None) -> EType:
        types = self._adj[u].get(v)
        if not types:
            raise KeyError(f"no edge {u}-{v}")
        et = types[-1] if etype is None else etype
        types.remove(et)
        if not types:
            del self._adj[u][v]
        if u != v:
            other = self._adj[v][u]
            other.remove(et)
            if not other:
                del self._adj[v][u]
        return et

    def remove_vertex(self, v: int) -> None:
        for w in list(self._adj[v]):
            if w != v:
                del self._adj[w][v]
        del self._adj[v], self._type[v], self._phase[v]
        if v in self.inputs:
            self.inputs.remove(v)
        if v in self.outputs:
            self.outputs.remove(v)

    def toggle_hadamard(self, u: int, v: int) -> int:
        """Flip presence of the single Hadamard edge u-v.

        Returns +1 if an edge was added, -1 if one was removed. Only valid in
        graph-like form (at most one Hadamard edge per pair).
        """
        types = self._adj[u].get(v)
        if types:
            if types != [EType.HADAMARD]:
                raise ValueError(f"edge {u}-{v} is not a single Hadamard edge: {types}")
            self.remove_edge(u, v)
            return -1
        self.add_edge(u, v, EType.HADAMARD)
        return 1

    # -- queries ----------------------------------------------------------

    def vertices(self) -> list[int]:
        return sorted(self._type)

    def spiders(self) -> list[int]:
        return sorted(v for v, t in self._type.items() if t != VType.BOUNDARY)

    def num_spiders(self) -> int:
        return sum(1 for t in self._type.values() if t != VType.BOUNDARY)

    def num_vertices(self) -> int:
        return len(self._type)

    def type(self, v: int) -> VType:
        return self._type[v]

    def phase(self, v: int) -> Phase:
        return self._phase[v]

    def set_phase(self, v: int, p: Phase) -> None:
        self._phase[v] = ph.normalize(p)

    def add_to_phase(self, v: int, p: Phase) -> None:
        self._phase[v] = ph.add(self._phase[v], p)

    def is_boundary(self, v: int) -> bool:
        return self._type[v] == VType.BOUNDARY

    def neighbors(self, v: int) -> list[int]:
        return sorted(w for w in self._adj[v] if w != v)

    def edge_types(self, u: int, v: int) -> list[EType]:
        return list(self._adj[u].get(v, ()))

    def edge_type(self, u: int, v: int) -> EType | None:
        types = self._adj[u].get(v)
        if not types:
            return None
        if len(types) > 1:
            raise ValueError(f"parallel edges between {u} and {v}")
        return types[0]

    def connected(self, u: int, v: int) -> bool:
        return bool(self._adj[u].get(v))

    def degree(self, v: int) -> int:
        """Number of edge ends at ``v`` (self-loops count twice)."""
        return sum(len(ts) * (2 if w == v else 1) for w, ts in self._adj[v].items())

    def edges(self) -> Iterator[tuple[int, int, EType]]:
        """Every edge once, as ``(u, v, type)`` with ``u <= v``, sorted."""
        for u in sorted(self._adj):
            for v in sorted(self._adj[u]):
                if v < u:
                    continue
                for et in self._adj[u][v]:
                    yield u, v, et

    def num_edges(self) -> int:
        return sum(1 for _ in self.edges())

    def num_hadamard_edges(self) -> int:
        return sum(1 for _, _, t in self.edges() if t == EType.HADAMARD)

    def boundary_neighbors(self, v: int) -> list[int]:
        return [w for w in self.neighbors(v) if self.is_boundary(w)]

    def is_interior(self, v: int) -> bool:
        return not self.is_boundary(v) and not any(self.is_boundary(w) for w in self._adj[v])

    def copy(self) -> "ZXDiagram":
        d = ZXDiagram()
        d._type = dict(self._type)
        d._phase = dict(self._phase)
        d._adj = {u: {v: list(ts) for v, ts in nb.items()} for u, nb in self._adj.items()}
        d.inputs = list(self.inputs)
        d.outputs = list(self.outputs)
        d.scalar = self.scalar
        d._next = self._next
        return d

    def __repr__(self) -> str:
        return (
            f"ZXDiagram(spiders={self.num_spiders()}, edges={self.num_edges()}, "
            f"inputs={len(self.inputs)}, outputs={len(self.outputs)})"
        )

    # -- export -----------------------------------------------------------

    def to_dot(self) -> str:
        """Graphviz dump; dashed edges are Hadamard edges."""
        lines = ["graph zx {", "  rankdir=LR;"]
        for v in self.vertices():
            t = self._type[v]
            if t == VType.BOUNDARY:
                role = "in" if v in self.inputs else "out" if v in self.outputs else "b"
                lines.append(f'  {v} [shape=plaintext, label="{role}{v}"];')
            else:
                color = "green" if t == VType.Z else "red"
                lines.append(
                    f'  {v} [shape=circle, style=filled, fillcolor={color}, '
                    f'label="{v}\\n{ph.fmt(self._phase[v])}"];'
                )
        for u, v, et in self.edges():
            style = " [style=dashed, color=blue]" if et == EType.HADAMARD else ""
            lines.append(f"  {u} -- {v}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------


def native_to_diagram(s: NativeSeq) -> ZXDiagram:
    """Graph-like diagram of a native sequence, with exact scalar.

    ``HRZ(q, t)`` adds ``t`` to the frontier spider of row ``q`` and opens a
    fresh phase-0 spider behind a Hadamard edge; ``CZ`` toggles a Hadamard
    edge between frontier spiders. Spider ids follow creation order: inputs
    first, then one spider per row, then one per ``HRZ``.
    """
    d = ZXDiagram()
    n = s.num_qubits
    ins = [d.add_input() for _ in range(n)]
    frontier = [d.add_vertex(VType.Z) for _ in range(n)]
    for b, f in zip(ins, frontier):
        d.add_edge(b, f)
    for op in s.ops:
        if isinstance(op, HRZ):
            f = frontier[op.qubit]
            d.add_to_phase(f, op.angle)
            w = d.add_vertex(VType.Z)
            d.add_edge(f, w, EType.HADAMARD)
            frontier[op.qubit] = w
        elif isinstance(op, CZ):
            d.toggle_hadamard(frontier[op.a], frontier[op.b])
            # H edge = sqrt2^-1 CZ; a cancelled pair contributes 1/2
            d.scalar *= SQRT2 if d.connected(frontier[op.a], frontier[op.b]) else SQRT2 / 2
        else:
            raise TypeError(f"unknown native op {op!r}")
    for f in frontier:
        o = d.add_output()
        d.add_edge(f, o)
    return d


# ---------------------------------------------------------------------------
# Graph-like normalization


def fuse(d: ZXDiagram, u: int, v: int) -> None:
    """Merge Z spider ``v`` into Z spider ``u`` along one plain edge (in place).

    Remaining u-v edges become self-loops on ``u``; call :func:`reduce_vertex`
    afterwards to clean them up. Exact (scalar unchanged).
    """
    if d.is_boundary(u) or d.is_boundary(v):
        raise ValueError("cannot fuse a boundary")
    d.remove_edge(u, v, EType.PLAIN)
    d.add_to_phase(u, d.phase(v))
    for w, types in list(d._adj[v].items()):
        for et in types:
            # v-v loops and leftover u-v edges both land on u as loops
            d.add_edge(u, u if w == v else w, et)
    d.remove_vertex(v)


def reduce_vertex(d: ZXDiagram, v: int) -> None:
    """Remove self-loops on spider ``v`` and cancel parallel Hadamard pairs.

    Only applies to Z spiders whose spider neighbours are all Z (the
    graph-like setting).
    """
    loops = d._adj[v].pop(v, [])
    for et in loops:
        if et == EType.HADAMARD:
            d.add_to_phase(v, Fraction(1))
            d.scalar /= SQRT2
    for w in list(d._adj[v]):
        if d.is_boundary(w):
            continue
        types = d._adj[v][w]
        nh = types.count(EType.HADAMARD)
        np_ = types.count(EType.PLAIN)
        if nh > 1:
            d.scalar *= 0.5 ** (nh // 2)
        keep = [EType.PLAIN] * np_ + [EType.HADAMARD] * (nh % 2)
        if keep:
            d._adj[v][w] = list(keep)
            d._adj[w][v] = list(keep)
        else:
            del d._adj[v][w], d._adj[w][v]


def to_graph_like(d: ZXDiagram) -> ZXDiagram:
    """Equivalent diagram with only Z spiders joined by single Hadamard edges.

    Steps: colour-change every X spider (toggle all its edge types), fuse
    along plain Z-Z edges, then drop self-loops and cancel parallel Hadamard
    pairs. Boundary edges keep their type as a flag.
    """
    g = d.copy()
    for v in g.vertices():
        if g.type(v) == VType.X:
            for w, types in g._adj[v].items():
                if w == v:
                    continue
                new = [t.toggled() for t in types]
                g._adj[v][w] = new
                g._adj[w][v] = list(new)
            g._type[v] = VType.Z
    while True:
        pair = next(
            (
                (u, w)
                for u in g.spiders()
                for w in g.neighbors(u)
                if not g.is_boundary(w) and EType.PLAIN in g._adj[u][w]
            ),
            None,
        )
        if pair is None:
            break
        fuse(g, *pair)
    for v in g.spiders():
        reduce_vertex(g, v)
    return g


def graph_like_violations(d: ZXDiagram) -> list[str]:
    """Return a list of graph-like invariant violations (empty when valid)."""
    errs: list[str] = []
    if set(d.inputs) & set(d.outputs):
        errs.append("inputs and outputs overlap")
    for v in d.vertices():
        t = d.type(v)
        if t == VType.BOUNDARY:
            if v not in d.inputs and v not in d.outputs:
                errs.append(f"boundary {v} is neither input nor output")
            if d.degree(v) != 1:
                errs.append(f"boundary {v} has degree {d.degree(v)}")
            continue
        if t != VType.Z:
            errs.append(f"spider {v} is not a Z spider")
        if d.edge_types(v, v):
            errs.append(f"self-loop on {v}")
        for w in d.neighbors(v):
            if d.is_boundary(w):
                continue
            types = d.edge_types(v, w)
            if types != [EType.HADAMARD]:
                errs.append(f"edge {v}-{w} has types {[t.name for t in types]}")
    for v in d.inputs + d.outputs:
        if v not in d._type or not d.is_boundary(v):
            errs.append(f"boundary id {v} is not a boundary vertex")
    return errs


def is_graph_like(d: ZXDiagram) -> bool:
    return not graph_like_violations(d)
