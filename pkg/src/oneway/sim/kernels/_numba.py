"""Numba-compiled statevector kernels; same contracts as ``_numpy``."""

import numpy as np
from numba import njit


@njit(cache=True)
def apply_1q(state, n, p, u):
    shift = n - 1 - p
    bit = 1 << shift
    half = 1 << (n - 1)
    u00, u01, u10, u11 = u[0, 0], u[0, 1], u[1, 0], u[1, 1]
    low = bit - 1
    for b in range(state.shape[0]):
        for k in range(half):
            i0 = ((k >> shift) << (shift + 1)) | (k & low)
            i1 = i0 | bit
            a0 = state[b, i0]
            a1 = state[b, i1]
            state[b, i0] = u00 * a0 + u01 * a1
            state[b, i1] = u10 * a0 + u11 * a1
    return state


@njit(cache=True)
def apply_2q(state, n, p1, p2, u):
    m1 = 1 << (n - 1 - p1)
    m2 = 1 << (n - 1 - p2)
    dim = 1 << n
    amp = np.empty(4, dtype=np.complex128)
    for b in range(state.shape[0]):
        for i in range(dim):
            if i & m1 or i & m2:
                continue
            idx = (i, i | m2, i | m1, i | m1 | m2)
            for r in range(4):
                amp[r] = state[b, idx[r]]
            for r in range(4):
                acc = 0j
                for c in range(4):
                    acc += u[r, c] * amp[c]
                state[b, idx[r]] = acc
    return state


@njit(cache=True)
def apply_cz(state, n, p1, p2):
    m = (1 << (n - 1 - p1)) | (1 << (n - 1 - p2))
    for b in range(state.shape[0]):
        for i in range(1 << n):
            if i & m == m:
                state[b, i] = -state[b, i]
    return state


@njit(cache=True)
def project(state, n, p, bra):
    shift = n - 1 - p
    bit = 1 << shift
    low = bit - 1
    out = np.empty((state.shape[0], 1 << (n - 1)), dtype=np.complex128)
    b0, b1 = bra[0], bra[1]
    for b in range(state.shape[0]):
        for k in range(1 << (n - 1)):
            i0 = ((k >> shift) << (shift + 1)) | (k & low)
            out[b, k] = b0 * state[b, i0] + b1 * state[b, i0 | bit]
    return out


@njit(cache=True)
def parity_fuse(state, n, pa, pb):
    sa = n - 1 - pa
    sb = n - 1 - pb
    bit_b = 1 << sb
    low = bit_b - 1
    out = np.empty((state.shape[0], 1 << (n - 1)), dtype=np.complex128)
    # the output register is the input with qubit pb deleted
    sa_out = sa - 1 if sa > sb else sa
    for b in range(state.shape[0]):
        for k in range(1 << (n - 1)):
            i = ((k >> sb) << (sb + 1)) | (k & low)
            if (k >> sa_out) & 1:
                i |= bit_b
            out[b, k] = state[b, i]
    return out
