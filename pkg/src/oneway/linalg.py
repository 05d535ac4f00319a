"""Dense linear maps and up-to-scalar comparison."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class LinearMap:
    """A ``2**outputs x 2**inputs`` matrix times an explicit scalar."""

    matrix: np.ndarray
    scalar: complex = 1.0

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def dense(self) -> np.ndarray:
        return self.matrix * self.scalar


def _as_array(m) -> np.ndarray:
    return m.dense() if isinstance(m, LinearMap) else np.asarray(m, dtype=complex)


def deviation_up_to_scalar(a, b) -> float:
    """Max-norm distance between ``a`` and ``b`` after removing a global scalar.

    Both maps are rescaled to the Frobenius norm of a unitary of the same
    width (``sqrt(cols)``) and phase-aligned by their overlap, so the result is
    on the scale of matrix entries of a unitary. Returns ``inf`` when the
    shapes differ or exactly one side vanishes.
    """
    a, b = _as_array(a), _as_array(b)
    if a.shape != b.shape:
        return float("inf")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0 if na == nb else float("inf")
    unit = np.sqrt(a.shape[1] if a.ndim == 2 else 1)
    a = a * (unit / na)
    b = b * (unit / nb)
    ov = np.vdot(a, b)
    if abs(ov) == 0:
        return float(np.max(np.abs(a - b)))
    a = a * (ov / abs(ov))
    return float(np.max(np.abs(a - b)))


def equal_up_to_scalar(a, b, tol: float = 1e-8) -> bool:
    return deviation_up_to_scalar(a, b) <= tol
