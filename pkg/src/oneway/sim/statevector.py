"""Statevector primitives: graph states, equatorial measurements, Type-1 fusion."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels

MAX_STATE_QUBITS = 24

H_MAT = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


class ZeroBranchError(ValueError):
    """A projection or fusion annihilated the state (probability-0 outcome)."""


class SizeCapError(ValueError):
    pass


@dataclass
class StateVector:
    """Unnormalized pure state on ``num_qubits`` qubits (qubit 0 most significant).

    Projections keep the branch weight in the amplitudes; call
    :meth:`normalized` explicitly to rescale.
    """

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != 1 << self.num_qubits:
            raise ValueError(f"{self.amplitudes.size} amplitudes do not match {self.num_qubits} qubits")

    @classmethod
    def plus(cls, n: int) -> "StateVector":
        return cls(n, np.full(1 << n, 2 ** (-n / 2), dtype=complex))

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroBranchError("cannot normalize the zero vector")
        return StateVector(self.num_qubits, self.amplitudes / nrm)

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def _batch(self) -> np.ndarray:
        return self.amplitudes.reshape(1, -1)

    def apply_1q(self, q: int, u: np.ndarray) -> "StateVector":
        out = self.copy()
        kernels.apply_1q(out._batch(), self.num_qubits, q, np.asarray(u, dtype=complex))
        return out

    def apply_cz(self, a: int, b: int) -> "StateVector":
        out = self.copy()
        kernels.apply_cz(out._batch(), self.num_qubits, a, b)
        return out

    def tensor(self, other: "StateVector") -> "StateVector":
        return StateVector(self.num_qubits + other.num_qubits, np.kron(self.amplitudes, other.amplitudes))

    def permute(self, order: list[int]) -> "StateVector":
        """New state whose qubit ``i`` is this state's qubit ``order[i]``."""
        t = self.amplitudes.reshape((2,) * self.num_qubits) if self.num_qubits else self.amplitudes
        return StateVector(self.num_qubits, np.transpose(t, order).reshape(-1) if self.num_qubits else t)


def fidelity(a: StateVector, b: StateVector) -> float:
    """``|<a|b>|^2`` of the normalized states."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("fidelity between registers of different size")
    na, nb = a.norm(), b.norm()
    if na == 0 or nb == 0:
        return 0.0
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2 / (na * nb) ** 2)


def graph_state(edges: Iterable[tuple[int, int]], n: int) -> StateVector:
    """CZ along every edge applied to ``|+>^n``."""
    if n > MAX_STATE_QUBITS:
        raise SizeCapError(f"graph state on {n} qubits exceeds the cap of {MAX_STATE_QUBITS}")
    s = StateVector.plus(n)
    batch = s._batch()
    for a, b in edges:
        if a == b:
            raise ValueError(f"self-loop on vertex {a}")
        kernels.apply_cz(batch, n, a, b)
    return s


def equatorial_bra(alpha: float, m: int) -> np.ndarray:
    """Coefficients of ``<+-alpha|`` with ``|+-alpha> = (|0> +- e^{i alpha}|1>)/sqrt 2``."""
    sign = -1.0 if m else 1.0
    return np.array([1.0, sign * np.exp(-1j * alpha)], dtype=complex) / math.sqrt(2)


def measure_equatorial(s: StateVector, q: int, alpha: float, m: int, tol: float = 1e-12) -> StateVector:
    """Project qubit ``q`` onto outcome ``m`` of the basis B(alpha) and drop it.

    The returned branch is unnormalized; its squared norm is the outcome
    probability when ``s`` is normalized.
    """
    if not 0 <= q < s.num_qubits:
        raise IndexError(f"qubit {q} outside register of {s.num_qubits}")
    out = kernels.project(s._batch(), s.num_qubits, q, equatorial_bra(alpha, m))
    res = StateVector(s.num_qubits - 1, out.reshape(-1))
    if res.norm() <= tol * max(s.norm(), 1e-300):
        raise ZeroBranchError(f"outcome {m} of B({alpha:.6g}) on qubit {q} has zero probability")
    return res


def fuse_type1(s: StateVector, qa: int, qb: int, tol: float = 1e-12) -> StateVector:
    """Apply the success Kraus operator ``|0><00| + |1><11|`` on (qa, qb); qb is removed."""
    if qa == qb:
        raise ValueError("Type-1 fusion needs two distinct qubits")
    out = kernels.parity_fuse(s._batch(), s.num_qubits, qa, qb)
    res = StateVector(s.num_qubits - 1, out.reshape(-1))
    if res.norm() <= tol * max(s.norm(), 1e-300):
        raise ZeroBranchError(f"fusion of qubits {qa} and {qb} cannot succeed")
    return res
