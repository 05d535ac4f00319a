"""Dense tensor contraction of ZX diagrams."""

from __future__ import annotations

import math

import numpy as np

from .. import phase as ph
from ..linalg import LinearMap
from .diagram import EType, VType, ZXDiagram

MAX_DENSE_VERTICES = 14
MAX_TENSOR_RANK = 26

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


class EvaluationCapError(ValueError):
    pass


def _spider_tensor(vtype: VType, alpha: float, k: int) -> np.ndarray:
    if k == 0:
        return np.array(1 + np.exp(1j * alpha))
    t = np.zeros((2,) * k, dtype=complex)
    t[(0,) * k] = 1
    t[(1,) * k] = np.exp(1j * alpha)
    if vtype == VType.X:
        for ax in range(k):
            t = np.moveaxis(np.tensordot(_H, t, axes=([1], [ax])), 0, ax)
    return t


def _contract_pair(a, la, b, lb):
    shared = [x for x in la if x in lb]
    ia = [la.index(x) for x in shared]
    ib = [lb.index(x) for x in shared]
    t = np.tensordot(a, b, axes=(ia, ib))
    labels = [x for x in la if x not in shared] + [x for x in lb if x not in shared]
    return t, labels


def evaluate(d: ZXDiagram, max_vertices: int | None = MAX_DENSE_VERTICES) -> LinearMap:
    """Linear map of ``d`` as a ``2^|outputs| x 2^|inputs|`` matrix.

    Contraction proceeds greedily, always merging the pair of tensors whose
    result has the smallest rank (a minimum-degree elimination order).
    ``max_vertices`` caps spiders plus boundaries; ``None`` disables the cap
    but intermediate tensors are still limited to ``MAX_TENSOR_RANK`` legs.
    The diagram's scalar is reported separately in the result.
    """
    if max_vertices is not None and d.num_vertices() > max_vertices:
        raise EvaluationCapError(
            f"diagram has {d.num_vertices()} vertices; dense evaluation cap is {max_vertices}"
        )
    next_label = 0
    legs: dict[int, list[int]] = {v: [] for v in d.vertices()}
    h_legs: dict[int, list[int]] = {v: [] for v in d.vertices()}
    extra: list[tuple[np.ndarray, list[int]]] = []
    for u, v, et in d.edges():
        if d.is_boundary(u) and d.is_boundary(v):
            # bare wire: its own 2-leg tensor between two open labels
            lu, lv = next_label, next_label + 1
            next_label += 2
            mat = _H if et == EType.HADAMARD else np.eye(2, dtype=complex)
            extra.append((mat, [lu, lv]))
            legs[u].append(lu)
            legs[v].append(lv)
            continue
        lab = next_label
        next_label += 1
        if u == v:
            lab2 = next_label
            next_label += 1
            legs[u] += [lab, lab2]
            extra.append((_H if et == EType.HADAMARD else np.eye(2, dtype=complex), [lab, lab2]))
            continue
        legs[u].append(lab)
        legs[v].append(lab)
        if et == EType.HADAMARD:
            # attach the Hadamard to a spider end, never to a boundary
            h_legs[v if d.is_boundary(u) else u].append(lab)

    tensors: list[tuple[np.ndarray, list[int]]] = []
    for v in d.vertices():
        if d.is_boundary(v):
            continue
        ls = legs[v]
        t = _spider_tensor(d.type(v), ph.to_radians(d.phase(v)), len(ls))
        for lab in h_legs[v]:
            ax = ls.index(lab)
            t = np.moveaxis(np.tensordot(_H, t, axes=([1], [ax])), 0, ax)
        tensors.append((t, list(ls)))
    tensors += extra

    while len(tensors) > 1:
        best = None
        for i in range(len(tensors)):
            li = tensors[i][1]
            for j in range(i + 1, len(tensors)):
                lj = tensors[j][1]
                sh = sum(1 for x in li if x in lj)
                if not sh:
                    continue
                rank = len(li) + len(lj) - 2 * sh
                key = (rank, -sh, i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            # disconnected pieces: outer product, smallest first
            tensors.sort(key=lambda tl: tl[0].ndim)
            i, j = 0, 1
        else:
            i, j = best[2], best[3]
        (a, la), (b, lb) = tensors[i], tensors[j]
        if len(set(la) ^ set(lb)) > MAX_TENSOR_RANK:
            raise EvaluationCapError(f"intermediate tensor exceeds {MAX_TENSOR_RANK} legs")
        t, labels = _contract_pair(a, la, b, lb)
        tensors = [x for k, x in enumerate(tensors) if k not in (i, j)] + [(t, labels)]

    if tensors:
        t, labels = tensors[0]
    else:
        t, labels = np.array(1.0 + 0j), []
    order = [legs[b][0] for b in d.outputs] + [legs[b][0] for b in d.inputs]
    if sorted(order) != sorted(labels):
        raise ValueError("dangling legs: every boundary must carry exactly one edge")
    t = np.transpose(t, [labels.index(x) for x in order]) if order else t
    mat = np.asarray(t).reshape(1 << len(d.outputs), 1 << len(d.inputs))
    return LinearMap(mat, d.scalar)


def evaluate_dense(d: ZXDiagram, max_vertices: int | None = MAX_DENSE_VERTICES) -> np.ndarray:
    """Matrix with the scalar folded in."""
    return evaluate(d, max_vertices).dense()
