"""Graph-like ZX simplification.

Rules, in sweep order (each fires at the lowest-id match, then the sweep
restarts)::

    fuse          plain Z-Z edge                        -1 spider
    identity      phase-0 spider of degree 2             -1
    scalar        isolated spider                        -1
    copy          interior Pauli leaf + interior nbr     -2
    lcomp         interior +-pi/2 spider                 -1
    pivot         interior Pauli pair                    -2
    pivot_bdy     interior Pauli + boundary Pauli        -2 + k
    lcomp_bdy     interior Pauli + boundary +-pi/2       -2 + k
    gadget_fuse   gadgets sharing a hub neighbourhood    -2
    pivot_gadget  interior Pauli + interior non-Clifford  0

``k`` is the number of boundary wires unfused (1 or 2). The pair
``(spider count, interior non-hub Clifford spiders)`` drops strictly on every
firing, which bounds the run.

Every rule updates ``ZXDiagram.scalar`` so the linear map is preserved
exactly. Clifford preconditions need exact phases; float phases never match.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from . import phase as ph
from .zx.diagram import SQRT2, EType, VType, ZXDiagram, fuse, reduce_vertex

MAX_FIRINGS = 10_000


class SimplifyLimitError(RuntimeError):
    def __init__(self, limit: int, last: "Firing | None"):
        tail = f"; last rule applied: {last}" if last else ""
        super().__init__(f"simplify exceeded {limit} rule firings{tail}")
        self.last = last


@dataclass(frozen=True)
class Firing:
    rule: str
    vertices: tuple[int, ...]
    phases: tuple[str, ...] = ()

    def __str__(self) -> str:
        vs = ",".join(map(str, self.vertices))
        ps = " ".join(self.phases)
        return f"{self.rule} [{vs}] {ps}".rstrip()


# ---------------------------------------------------------------------------
# helpers


def _toggle_pairs(d: ZXDiagram, pairs: Iterable[tuple[int, int]]) -> int:
    """Toggle Hadamard edges; return (#added - #removed)."""
    return sum(d.toggle_hadamard(a, b) for a, b in pairs)


def _spider_nbrs_only(d: ZXDiagram, v: int) -> bool:
    return not d.is_boundary(v) and d.is_interior(v)


def _is_leaf(d: ZXDiagram, g: int) -> bool:
    return not d.is_boundary(g) and len(d.neighbors(g)) == 1 and d.degree(g) == 1


def _hub_leaf(d: ZXDiagram, h: int) -> int | None:
    """The non-Clifford leaf of gadget hub ``h``, or None if ``h`` is no hub."""
    if not d.is_interior(h) or not ph.is_pauli(d.phase(h)):
        return None
    for g in d.neighbors(h):
        if _is_leaf(d, g) and not ph.is_clifford(d.phase(g)):
            return g
    return None


def is_gadget_hub(d: ZXDiagram, v: int) -> bool:
    return _hub_leaf(d, v) is not None


def termination_measure(d: ZXDiagram) -> tuple[int, int]:
    """(spider count, interior Clifford spiders that are not gadget hubs)."""
    cliff = sum(
        1
        for v in d.spiders()
        if d.is_interior(v) and ph.is_clifford(d.phase(v)) and not is_gadget_hub(d, v)
    )
    return d.num_spiders(), cliff


def residual_clifford_spiders(d: ZXDiagram) -> list[int]:
    """Interior spiders with a Clifford phase that are not gadget hubs."""
    return [
        v
        for v in d.spiders()
        if d.is_interior(v) and ph.is_clifford(d.phase(v)) and not is_gadget_hub(d, v)
    ]


def _unfuse_boundaries(d: ZXDiagram, v: int) -> list[int]:
    """Push every boundary wire of ``v`` behind a fresh phase-0 spider.

    ``b -[t]- v`` becomes ``b -[t^H]- n -H- v``; exact, scalar unchanged.
    """
    fresh = []
    for b in d.boundary_neighbors(v):
        t = d.remove_edge(v, b)
        n = d.add_vertex(VType.Z)
        d.add_edge(b, n, t.toggled())
        d.add_edge(n, v, EType.HADAMARD)
        fresh.append(n)
    return fresh


# ---------------------------------------------------------------------------
# in-place rule bodies


def _do_fuse(d: ZXDiagram, u: int, v: int) -> None:
    fuse(d, u, v)
    reduce_vertex(d, u)


def _do_identity(d: ZXDiagram, v: int) -> None:
    u, w = d.neighbors(v)
    t = d.edge_type(v, u).compose(d.edge_type(v, w))
    d.remove_vertex(v)
    d.add_edge(u, w, t)
    if not d.is_boundary(u) and not d.is_boundary(w):
        if t == EType.PLAIN:
            _do_fuse(d, u, w)
        else:
            reduce_vertex(d, u)


def _do_scalar(d: ZXDiagram, v: int) -> None:
    d.scalar *= 1 + complex(math.cos(ph.to_radians(d.phase(v))), math.sin(ph.to_radians(d.phase(v))))
    d.remove_vertex(v)


def _do_copy(d: ZXDiagram, u: int) -> None:
    (v,) = d.neighbors(u)
    j = int(d.phase(u))
    beta = ph.to_radians(d.phase(v))
    rest = [w for w in d.neighbors(v) if w != u]
    d.scalar *= SQRT2 * (1 / SQRT2) ** len(rest)
    if j:
        d.scalar *= complex(math.cos(beta), math.sin(beta))
        for w in rest:
            d.add_to_phase(w, Fraction(1))
    d.remove_vertex(u)
    d.remove_vertex(v)


def _do_lcomp(d: ZXDiagram, v: int) -> None:
    a = d.phase(v)
    nb = d.neighbors(v)
    n = len(nb)
    delta = _toggle_pairs(d, itertools.combinations(nb, 2))
    for w in nb:
        d.add_to_phase(w, ph.neg(a))
    omega = complex(1, 1) / SQRT2 if a == Fraction(1, 2) else complex(1, -1) / SQRT2
    d.scalar *= omega * SQRT2 ** (1 - n + delta)
    d.remove_vertex(v)


def _do_pivot(d: ZXDiagram, u: int, v: int) -> None:
    nu = set(d.neighbors(u)) - {v}
    nv = set(d.neighbors(v)) - {u}
    A, B, C = sorted(nu - nv), sorted(nv - nu), sorted(nu & nv)
    j, k = int(d.phase(u)), int(d.phase(v))
    deg = len(nu) + len(nv) + 1
    pairs = list(itertools.product(A, B)) + list(itertools.product(A, C)) + list(itertools.product(B, C))
    delta = _toggle_pairs(d, pairs)
    for w in B + C:
        d.add_to_phase(w, Fraction(j))
    for w in A + C:
        d.add_to_phase(w, Fraction(k))
    for w in C:
        d.add_to_phase(w, Fraction(1))
    d.scalar *= 2 * (-1) ** (j * k) * SQRT2 ** (delta - deg)
    d.remove_vertex(u)
    d.remove_vertex(v)


def _normalize_hub(d: ZXDiagram, h: int, g: int) -> None:
    """Move a pi on gadget hub ``h`` onto its leaf ``g`` (leaf phase negates)."""
    if d.phase(h) == Fraction(1):
        beta = ph.to_radians(d.phase(g))
        d.set_phase(h, Fraction(0))
        d.set_phase(g, ph.neg(d.phase(g)))
        d.scalar *= complex(math.cos(beta), math.sin(beta))


def _do_gadget_fuse(d: ZXDiagram, h1: int, g1: int, h2: int, g2: int) -> None:
    _normalize_hub(d, h1, g1)
    _normalize_hub(d, h2, g2)
    m = len(d.neighbors(h1)) - 1
    d.add_to_phase(g1, d.phase(g2))
    d.scalar *= 2 * (1 / SQRT2) ** (m + 1)
    d.remove_vertex(g2)
    d.remove_vertex(h2)


def _do_pivot_gadget(d: ZXDiagram, u: int, v: int) -> None:
    beta = d.phase(v)
    d.set_phase(v, Fraction(0))
    h = d.add_vertex(VType.Z)
    g = d.add_vertex(VType.Z, beta)
    d.add_edge(v, h, EType.HADAMARD)
    d.add_edge(h, g, EType.HADAMARD)
    _do_pivot(d, u, v)
    _normalize_hub(d, h, g)


# ---------------------------------------------------------------------------
# matchers: return the lowest-id match or None


def _m_fuse(d):
    for u in d.spiders():
        for w in d.neighbors(u):
            if not d.is_boundary(w) and EType.PLAIN in d.edge_types(u, w):
                return (u, w)
    return None


def _m_identity(d):
    for v in d.spiders():
        if ph.is_zero(d.phase(v)) and d.degree(v) == 2 and len(d.neighbors(v)) == 2:
            return (v,)
    return None


def _m_scalar(d):
    for v in d.spiders():
        if d.degree(v) == 0:
            return (v,)
    return None


def _m_copy(d):
    for u in d.spiders():
        if ph.is_pauli(d.phase(u)) and _is_leaf(d, u):
            (v,) = d.neighbors(u)
            if d.is_interior(v) and d.edge_type(u, v) == EType.HADAMARD:
                return (u,)
    return None


def _m_lcomp(d):
    for v in d.spiders():
        if ph.is_proper_clifford(d.phase(v)) and d.is_interior(v):
            return (v,)
    return None


def _pauli_interior(d, v) -> bool:
    return ph.is_pauli(d.phase(v)) and d.is_interior(v)


def _m_pivot(d):
    for u, v, et in d.edges():
        if u != v and et == EType.HADAMARD and _pauli_interior(d, u) and _pauli_interior(d, v):
            return (u, v)
    return None


def _boundary_partner(d, want: Callable[[object], bool]):
    for u in d.spiders():
        if not _pauli_interior(d, u):
            continue
        hub = is_gadget_hub(d, u)
        for v in d.neighbors(u):
            if d.is_boundary(v) or d.is_interior(v) or not want(d.phase(v)):
                continue
            k = len(d.boundary_neighbors(v))
            if k == 1 or (k == 2 and not hub):
                return (u, v)
    return None


def _m_pivot_boundary(d):
    return _boundary_partner(d, ph.is_pauli)


def _m_lcomp_boundary(d):
    return _boundary_partner(d, ph.is_proper_clifford)


def _gadgets(d) -> list[tuple[int, int]]:
    out = []
    for h in d.spiders():
        g = _hub_leaf(d, h)
        if g is not None:
            out.append((h, g))
    return out


def _m_gadget_fuse(d):
    seen: dict[frozenset, tuple[int, int]] = {}
    for h, g in _gadgets(d):
        key = frozenset(w for w in d.neighbors(h) if w != g)
        if key in seen:
            return seen[key] + (h, g)
        seen[key] = (h, g)
    return None


def _m_pivot_gadget(d):
    for u in d.spiders():
        if not _pauli_interior(d, u) or is_gadget_hub(d, u):
            continue
        for v in d.neighbors(u):
            if d.is_interior(v) and not ph.is_clifford(d.phase(v)) and len(d.neighbors(v)) > 1:
                return (u, v)
    return None


def _fire_pivot_boundary(d, u, v):
    _unfuse_boundaries(d, v)
    _do_pivot(d, u, v)


def _fire_lcomp_boundary(d, u, v):
    _unfuse_boundaries(d, v)
    _do_lcomp(d, v)
    _do_lcomp(d, u)


RULES: list[tuple[str, Callable, Callable]] = [
    ("fuse", _m_fuse, _do_fuse),
    ("identity", _m_identity, _do_identity),
    ("scalar", _m_scalar, _do_scalar),
    ("copy", _m_copy, _do_copy),
    ("lcomp", _m_lcomp, _do_lcomp),
    ("pivot", _m_pivot, _do_pivot),
    ("pivot_bdy", _m_pivot_boundary, _fire_pivot_boundary),
    ("lcomp_bdy", _m_lcomp_boundary, _fire_lcomp_boundary),
    ("gadget_fuse", _m_gadget_fuse, _do_gadget_fuse),
    ("pivot_gadget", _m_pivot_gadget, _do_pivot_gadget),
]

RULE_NAMES = tuple(name for name, _, _ in RULES)


# ---------------------------------------------------------------------------
# public single-rule operations (return a new diagram, or None if the
# precondition fails)


def fuse_spiders(d: ZXDiagram, u: int, v: int) -> ZXDiagram | None:
    if u == v or u not in d.vertices() or v not in d.vertices():
        return None
    if d.type(u) != VType.Z or d.type(v) != VType.Z or EType.PLAIN not in d.edge_types(u, v):
        return None
    g = d.copy()
    _do_fuse(g, u, v)
    return g


def local_complementation(d: ZXDiagram, v: int) -> ZXDiagram | None:
    if v not in d.vertices() or d.type(v) != VType.Z:
        return None
    if not ph.is_proper_clifford(d.phase(v)) or not d.is_interior(v):
        return None
    if any(d.edge_types(v, w) != [EType.HADAMARD] for w in d.neighbors(v)):
        return None
    g = d.copy()
    _do_lcomp(g, v)
    return g


def pivot(d: ZXDiagram, u: int, v: int) -> ZXDiagram | None:
    if u == v or u not in d.vertices() or v not in d.vertices():
        return None
    if not (_pauli_interior(d, u) and _pauli_interior(d, v)):
        return None
    if d.edge_types(u, v) != [EType.HADAMARD]:
        return None
    g = d.copy()
    _do_pivot(g, u, v)
    return g


def fuse_phase_gadgets(d: ZXDiagram) -> ZXDiagram:
    """Merge gadgets with equal hub neighbourhoods and drop Pauli gadgets."""
    g = d.copy()
    while True:
        m = _m_gadget_fuse(g)
        if m is not None:
            _do_gadget_fuse(g, *m)
            continue
        leaf = next(
            (
                u
                for u in g.spiders()
                if ph.is_pauli(g.phase(u))
                and _is_leaf(g, u)
                and g.is_interior(g.neighbors(u)[0])
                and ph.is_pauli(g.phase(g.neighbors(u)[0]))
            ),
            None,
        )
        if leaf is None:
            return g
        _do_copy(g, leaf)


# ---------------------------------------------------------------------------


@dataclass
class SimplifyResult:
    diagram: ZXDiagram
    firings: list[Firing] = field(default_factory=list)


def _describe(d: ZXDiagram, rule: str, match: tuple[int, ...]) -> Firing:
    return Firing(rule, tuple(match), tuple(ph.fmt(d.phase(v)) for v in match))


def simplify(
    d: ZXDiagram,
    *,
    max_firings: int = MAX_FIRINGS,
    rules: Iterable[str] | None = None,
    on_fire: Callable[[Firing, ZXDiagram], None] | None = None,
    check_measure: bool = False,
) -> SimplifyResult:
    """Run the rule sweep to a fixpoint on a copy of ``d``.

    ``on_fire`` is called after every firing with the rewritten diagram
    (live object; copy it if you keep it). With ``check_measure`` the
    termination measure is asserted to drop on every firing.
    """
    g = d.copy()
    enabled = set(RULE_NAMES if rules is None else rules)
    unknown = enabled - set(RULE_NAMES)
    if unknown:
        raise ValueError(f"unknown rules: {sorted(unknown)}")
    active = [r for r in RULES if r[0] in enabled]
    firings: list[Firing] = []
    measure = termination_measure(g) if check_measure else None
    while True:
        for name, match, apply in active:
            m = match(g)
            if m is not None:
                break
        else:
            return SimplifyResult(g, firings)
        if len(firings) >= max_firings:
            raise SimplifyLimitError(max_firings, firings[-1] if firings else None)
        f = _describe(g, name, m)
        apply(g, *m)
        firings.append(f)
        if check_measure:
            new = termination_measure(g)
            if not new < measure:
                raise AssertionError(f"termination measure did not drop: {measure} -> {new} after {f}")
            measure = new
        if on_fire is not None:
            on_fire(f, g)
