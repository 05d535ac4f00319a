"""Pure-numpy statevector kernels.

States are 2-D complex arrays of shape ``(batch, 2**n)``; the batch axis
carries independent columns (e.g. one per computational input basis vector).
Qubit position ``p`` addresses bit ``n - 1 - p`` of the flat index, i.e.
position 0 is the most significant qubit.
"""

import numpy as np


def _split(state, n, p):
    return state.reshape(state.shape[0], 1 << p, 2, 1 << (n - p - 1))


def apply_1q(state, n, p, u):
    v = _split(state, n, p)
    a0 = v[:, :, 0, :].copy()
    a1 = v[:, :, 1, :]
    v[:, :, 0, :] = u[0, 0] * a0 + u[0, 1] * a1
    v[:, :, 1, :] = u[1, 0] * a0 + u[1, 1] * a1
    return state


def apply_2q(state, n, p1, p2, u):
    b = state.shape[0]
    t = state.reshape((b,) + (2,) * n)
    t = np.moveaxis(t, (p1 + 1, p2 + 1), (n - 1, n))
    shp = t.shape
    t = t.reshape(-1, 4) @ u.T
    t = np.moveaxis(t.reshape(shp), (n - 1, n), (p1 + 1, p2 + 1))
    state[...] = t.reshape(b, -1)
    return state


def apply_cz(state, n, p1, p2):
    idx = np.arange(1 << n)
    mask = ((idx >> (n - 1 - p1)) & 1) & ((idx >> (n - 1 - p2)) & 1)
    state[:, mask.astype(bool)] *= -1
    return state


def project(state, n, p, bra):
    v = _split(state, n, p)
    out = bra[0] * v[:, :, 0, :] + bra[1] * v[:, :, 1, :]
    return np.ascontiguousarray(out.reshape(state.shape[0], -1))


def parity_fuse(state, n, pa, pb):
    b = state.shape[0]
    t = state.reshape((b,) + (2,) * n)
    # diagonal over the (pa, pb) axes lands at the end; put it back at pa
    d = np.diagonal(t, axis1=pa + 1, axis2=pb + 1)
    keep = pa if pa < pb else pa - 1
    d = np.moveaxis(d, -1, keep + 1)
    return np.ascontiguousarray(d.reshape(b, -1))
