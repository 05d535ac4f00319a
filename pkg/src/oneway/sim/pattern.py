"""Execute measurement patterns on the statevector backend.

Inputs are handled Choi-style: the batch axis carries one column per
computational basis state of the input legs, so a run returns the full linear
map of the pattern. Vertices join the register only when first needed and
leave it as soon as they are measured, which keeps the live width near the
graph's path-width instead of its size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import phase as ph
from ..linalg import LinearMap
from ..mgraph import MGraph
from . import kernels
from .statevector import MAX_STATE_QUBITS, SizeCapError, ZeroBranchError, equatorial_bra

_PLUS = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)


def correction_matrix(theta, hadamard: bool) -> np.ndarray:
    """``H^hadamard Rz(theta)`` for an output correction."""
    u = np.diag([1.0, np.exp(1j * ph.to_radians(theta))]).astype(complex)
    if hadamard:
        u = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2) @ u
    return u


class UnsupportedPatternError(ValueError):
    pass


@dataclass
class FeedForwardRun:
    """One sampled execution: corrected map and the outcomes that produced it."""

    map: LinearMap
    outcomes: list[tuple[int, int]] = field(default_factory=list)


class _Register:
    def __init__(self, m: MGraph, cap: int):
        self.m = m
        self.adj = m.adjacency()
        self.cap = cap
        k = len(m.inputs)
        self.batch_bits = k
        self._check(k)
        self.state = np.eye(1 << k, dtype=complex)
        self.live: list[int] = list(m.inputs)
        self.done: set[tuple[int, int]] = set()
        self.gone: set[int] = set()
        self.peak = k
        for v in m.inputs:
            self._entangle(v)

    def _check(self, width: int) -> None:
        if self.batch_bits + width > self.cap:
            raise SizeCapError(
                f"pattern needs {width} live qubits with {self.batch_bits} input legs; cap is {self.cap}"
            )

    def _entangle(self, v: int) -> None:
        n = len(self.live)
        pv = self.live.index(v)
        for w in self.adj[v]:
            e = (min(v, w), max(v, w))
            if w in self.live and e not in self.done:
                kernels.apply_cz(self.state, n, pv, self.live.index(w))
                self.done.add(e)

    def ensure(self, v: int) -> None:
        if v in self.live or v in self.gone:
            return
        self._check(len(self.live) + 1)
        b = self.state.shape[0]
        self.state = (self.state.reshape(b, -1, 1) * _PLUS).reshape(b, -1)
        self.live.append(v)
        self.peak = max(self.peak, len(self.live))
        self._entangle(v)

    def prepare(self, v: int) -> None:
        """Bring ``v`` and its whole neighbourhood into the register."""
        self.ensure(v)
        for w in self.adj[v]:
            self.ensure(w)

    def branch(self, v: int, alpha: float, m: int) -> np.ndarray:
        return kernels.project(self.state, len(self.live), self.live.index(v), equatorial_bra(alpha, m))

    def commit(self, v: int, new_state: np.ndarray) -> None:
        self.state = new_state
        self.live.remove(v)
        self.gone.add(v)

    def apply_1q(self, v: int, u: np.ndarray) -> None:
        kernels.apply_1q(self.state, len(self.live), self.live.index(v), u)

    def finish(self) -> np.ndarray:
        for v in self.m.outputs:
            self.ensure(v)
        for v, (theta, had) in sorted(self.m.corrections.items()):
            self.apply_1q(v, correction_matrix(theta, had))
        n = len(self.live)
        b = self.state.shape[0]
        if sorted(self.live) != sorted(self.m.outputs):
            raise ValueError("unmeasured non-output vertices remain")
        t = self.state.reshape((b,) + (2,) * n)
        t = np.transpose(t, [0] + [1 + self.live.index(o) for o in self.m.outputs])
        return np.ascontiguousarray(t.reshape(b, -1).T)


def _postselect(m: MGraph, cap: int) -> LinearMap:
    reg = _Register(m, cap)
    for v in m.order:
        reg.prepare(v)
        reg.commit(v, reg.branch(v, ph.to_radians(m.angles[v]), 0))
    mat = reg.finish()
    if not np.any(mat):
        raise ZeroBranchError("the all-zero outcome branch vanishes for this pattern")
    return LinearMap(mat)


def chain_path(m: MGraph) -> list[int]:
    """Vertices of a single-row pattern from input to output, or raise."""
    adj = m.adjacency()
    if len(m.inputs) != 1 or len(m.outputs) != 1:
        raise UnsupportedPatternError("feed-forward needs exactly one input and one output")
    path = [m.inputs[0]]
    prev = None
    while True:
        nxt = [w for w in adj[path[-1]] if w != prev]
        if len(nxt) > 1 or (prev is not None and len(adj[path[-1]]) > 2):
            raise UnsupportedPatternError("feed-forward is only supported on chain patterns")
        if not nxt:
            break
        prev = path[-1]
        path.append(nxt[0])
        if len(path) > len(adj):
            raise UnsupportedPatternError("pattern contains a cycle")
    if len(path) != m.num_vertices() or path[-1] != m.outputs[0]:
        raise UnsupportedPatternError("feed-forward is only supported on chain patterns")
    if m.order != path[:-1]:
        raise UnsupportedPatternError("chain measurement order must run from input to output")
    return path


def _feedforward(m: MGraph, cap: int, rng: np.random.Generator) -> FeedForwardRun:
    path = chain_path(m)
    reg = _Register(m, cap)
    sx = sz = 0
    outcomes = []
    for v in path[:-1]:
        reg.prepare(v)
        alpha = ph.to_radians(m.angles[v]) * (-1) ** sx
        branches = [reg.branch(v, alpha, k) for k in (0, 1)]
        w = np.array([np.vdot(b, b).real for b in branches])
        if w.sum() <= 0:
            raise ZeroBranchError(f"both outcomes vanish at vertex {v}")
        k = int(rng.random() < w[1] / w.sum())
        reg.commit(v, branches[k])
        outcomes.append((v, k))
        sx, sz = k ^ sz, sx
    out = path[-1]
    reg.ensure(out)
    if sx:
        reg.apply_1q(out, _X)
    if sz:
        reg.apply_1q(out, _Z)
    return FeedForwardRun(LinearMap(reg.finish()), outcomes)


def run_pattern(
    m: MGraph,
    mode: str = "postselect_zero",
    *,
    rng: np.random.Generator | None = None,
    cap: int = MAX_STATE_QUBITS,
) -> LinearMap | FeedForwardRun:
    """Run pattern ``m`` and return its map (``2^|outputs| x 2^|inputs|``).

    ``postselect_zero`` keeps outcome 0 at every vertex. ``sample_with_feedforward``
    draws outcomes with Born weights and applies the byproduct cascade of a
    teleportation chain; it only accepts single-row patterns.
    """
    m.validate()
    if mode == "postselect_zero":
        return _postselect(m, cap)
    if mode == "sample_with_feedforward":
        return _feedforward(m, cap, rng if rng is not None else np.random.default_rng())
    raise ValueError(f"unknown mode {mode!r}")


def pattern_width(m: MGraph) -> int:
    """Peak number of live qubits a post-selected run of ``m`` needs."""
    adj = m.adjacency()
    live = set(m.inputs)
    peak = len(live)
    for v in m.order:
        live.add(v)
        live.update(adj[v])
        peak = max(peak, len(live))
        live.discard(v)
    return max(peak, len(live | set(m.outputs)))
