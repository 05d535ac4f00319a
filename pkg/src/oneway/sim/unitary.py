"""Reference dense unitaries, built gate by gate from textbook matrices.

Deliberately independent of the frontend's decomposition tables: every source
gate has its own matrix here.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .. import phase as ph
from ..frontend import CZ, HRZ, Circuit, NativeSeq
from . import kernels

MAX_UNITARY_QUBITS = 7

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _p(x) -> float:
    return ph.to_radians(x) if isinstance(x, (Fraction, float)) else float(x)


def rz_mat(t: float) -> np.ndarray:
    """Phase-gate form ``diag(1, e^{it})``."""
    return np.diag([1, np.exp(1j * t)])


def rx_mat(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry_mat(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def u3_mat(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]]
    )


def hrz_mat(t: float) -> np.ndarray:
    return _H @ rz_mat(t)


def _controlled(u: np.ndarray) -> np.ndarray:
    m = np.eye(4, dtype=complex)
    m[2:, 2:] = u
    return m


_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)


def toffoli_matrix() -> np.ndarray:
    m = np.eye(8, dtype=complex)
    m[[6, 7]] = m[[7, 6]]
    return m


def fredkin_matrix() -> np.ndarray:
    m = np.eye(8, dtype=complex)
    m[[5, 6]] = m[[6, 5]]
    return m


def gate_matrix(name: str, params=()) -> np.ndarray:
    p = [_p(x) for x in params]
    simple = {
        "id": _I, "x": _X, "y": _Y, "z": _Z, "h": _H,
        "s": rz_mat(math.pi / 2), "sdg": rz_mat(-math.pi / 2),
        "t": rz_mat(math.pi / 4), "tdg": rz_mat(-math.pi / 4),
        "sx": np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]) / 2,
        "sxdg": np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]]) / 2,
        "cx": _controlled(_X), "cy": _controlled(_Y), "cz": _CZ, "ch": _controlled(_H),
        "swap": _SWAP, "ccx": None, "cswap": None,
    }
    if name in simple:
        if name == "ccx":
            return toffoli_matrix()
        if name == "cswap":
            return fredkin_matrix()
        return simple[name]
    if name in ("rz", "u1"):
        return rz_mat(p[0])
    if name == "u0":
        return _I
    if name == "rx":
        return rx_mat(p[0])
    if name == "ry":
        return ry_mat(p[0])
    if name == "u3":
        return u3_mat(*p)
    if name == "u2":
        return u3_mat(math.pi / 2, p[0], p[1])
    if name == "crz":
        return np.diag([1, 1, np.exp(-0.5j * p[0]), np.exp(0.5j * p[0])])
    if name == "cu1":
        return np.diag([1, 1, 1, np.exp(1j * p[0])])
    if name == "rzz":
        a, b = np.exp(-0.5j * p[0]), np.exp(0.5j * p[0])
        return np.diag([a, b, b, a])
    raise KeyError(f"no reference matrix for gate '{name}'")


def _apply_k(batch: np.ndarray, n: int, qubits: tuple[int, ...], u: np.ndarray) -> None:
    k = len(qubits)
    b = batch.shape[0]
    t = batch.reshape((b,) + (2,) * n)
    axes = [q + 1 for q in qubits]
    t = np.moveaxis(t, axes, list(range(n - k + 1, n + 1)))
    shp = t.shape
    t = (t.reshape(-1, 1 << k) @ u.T).reshape(shp)
    t = np.moveaxis(t, list(range(n - k + 1, n + 1)), axes)
    batch[...] = t.reshape(b, -1)


def apply_gate(batch: np.ndarray, n: int, qubits: tuple[int, ...], u: np.ndarray) -> None:
    u = np.ascontiguousarray(u, dtype=complex)
    if len(qubits) == 1:
        kernels.apply_1q(batch, n, qubits[0], u)
    elif len(qubits) == 2:
        kernels.apply_2q(batch, n, qubits[0], qubits[1], u)
    else:
        _apply_k(batch, n, qubits, u)


def unitary_of(c: Circuit | NativeSeq, max_qubits: int = MAX_UNITARY_QUBITS) -> np.ndarray:
    """Dense ``2^n x 2^n`` unitary, qubit 0 most significant."""
    n = c.num_qubits
    if n > max_qubits:
        raise ValueError(f"{n} qubits exceeds the dense-unitary cap of {max_qubits}")
    dim = 1 << n
    batch = np.eye(dim, dtype=complex)  # row b evolves basis vector e_b
    if isinstance(c, NativeSeq):
        for op in c.ops:
            if isinstance(op, HRZ):
                kernels.apply_1q(batch, n, op.qubit, hrz_mat(_p(op.angle)))
            elif isinstance(op, CZ):
                kernels.apply_cz(batch, n, op.a, op.b)
    else:
        for g in c.gates:
            apply_gate(batch, n, g.qubits, gate_matrix(g.name, g.params))
    return batch.T.copy()
