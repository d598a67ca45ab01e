"""Sylvester and trimmed Sylvester matrices.

``S_k(M)`` is the block-Toeplitz matrix with ``k`` block columns whose block
``(p, q)`` is ``M_{p-q}``.  Its rows are ordered "interleaved": row ``i`` of
block row ``p`` sits at position ``p*m + i``.  ``T_k(M)`` deletes, for every
row ``i``, the ``d - d_i`` bottom rows of that interleaved sub-block which are
zero for every matrix of the profile; the remaining rows keep their relative
order.  Row ``(p, i)`` of ``T_k`` therefore exists iff ``p < k + d_i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import InputError
from .polymat import DegreeProfile, PolyMatrix


@dataclass(frozen=True, eq=False)
class TrimmedSylvester:
    k: int
    data: np.ndarray
    row_map: tuple[tuple[int, int], ...]
    """``row_map[r] = (i, p)``: row ``r`` is row ``i`` of block row ``p`` of ``S_k``."""

    @property
    def shape(self):
        return self.data.shape


@dataclass(frozen=True, eq=False)
class SylvesterMatrix:
    k: int
    data: np.ndarray

    @property
    def shape(self):
        return self.data.shape


def _check_k(k):
    if int(k) != k or k < 1:
        raise InputError(f"k must be a positive integer, got {k!r}")


@lru_cache(maxsize=512)
def row_table(degrees: tuple[int, ...], k: int) -> np.ndarray:
    """``(k+d) x m`` table: row of ``T_k`` holding ``(p, i)``, or ``-1`` if trimmed."""
    m, d = len(degrees), max(degrees)
    table = np.full((k + d, m), -1, dtype=np.int64)
    r = 0
    for p in range(k + d):
        for i, di in enumerate(degrees):
            if p < k + di:
                table[p, i] = r
                r += 1
    table.flags.writeable = False
    return table


def trimmed_shape(profile: DegreeProfile, k: int) -> tuple[int, int]:
    return k * profile.m + profile.total, k * profile.width


def build_trimmed(M: PolyMatrix, k: int) -> TrimmedSylvester:
    """``T_k(M)``, assembled directly from the row coefficients."""
    _check_k(k)
    key = ("T", k)
    hit = M._memo.get(key)
    if hit is not None:
        return hit
    table = row_table(M.degrees, k)
    out = np.zeros(trimmed_shape(M.profile, k), dtype=M.stack.dtype)
    _kernels.fill_trimmed(out, M.stack, M.row_start, M.degrees, table, k, M.width)
    out.flags.writeable = False
    rows = np.argwhere(table >= 0)  # (p, i) pairs in row-major order = T_k row order
    res = TrimmedSylvester(k, out, tuple((int(i), int(p)) for p, i in rows))
    M._memo[key] = res
    return res


def trimmed(M: PolyMatrix, k: int) -> np.ndarray:
    """Shorthand for ``build_trimmed(M, k).data``."""
    return build_trimmed(M, k).data


def build_sylvester(M: PolyMatrix, k: int) -> SylvesterMatrix:
    """``S_k(M)`` of size ``(k+d)m x k(m+n)``, with ``M`` viewed as degree ``<= d``."""
    _check_k(k)
    cube = M.coefficient_cube()
    d, m, w = cube.shape[0] - 1, M.m, M.width
    out = np.zeros(((k + d) * m, k * w), dtype=M.stack.dtype)
    for q in range(k):
        for j in range(d + 1):
            out[(q + j) * m:(q + j + 1) * m, q * w:(q + 1) * w] = cube[j]
    return SylvesterMatrix(k, out)


def untrim(T: TrimmedSylvester, profile: DegreeProfile) -> np.ndarray:
    """Re-insert the trimmed zero rows of ``T_k``, giving ``S_k``."""
    m = profile.m
    out = np.zeros(((T.k + profile.d) * m, T.data.shape[1]), dtype=T.data.dtype)
    idx = [p * m + i for i, p in T.row_map]
    out[idx] = T.data
    return out


def nesting_permutation(profile: DegreeProfile, k: int) -> np.ndarray:
    """Index array ``perm`` with ``T_{k+1}[perm] = [[T_k, X], [0, M_dbar]]``.

    The last row of each per-row block of ``T_{k+1}`` (block row ``k + d_i``)
    moves to the bottom, in row order; everything else keeps its order.
    ``k = 0`` gives ``P_1`` with ``T_1[perm] = [[X_1], [M_dbar]]``.
    """
    if int(k) != k or k < 0:
        raise InputError(f"k must be a nonnegative integer, got {k!r}")
    table = row_table(profile.degrees, k + 1)
    last = [int(table[k + di, i]) for i, di in enumerate(profile.degrees)]
    moved = set(last)
    n_rows = (k + 1) * profile.m + profile.total
    head = [r for r in range(n_rows) if r not in moved]
    return np.array(head + last, dtype=np.int64)


def to_csv(A: np.ndarray) -> str:
    """One matrix row per line; complex entries printed with Python's ``repr``."""
    lines = []
    for row in np.asarray(A):
        lines.append(",".join(repr(complex(x)) if np.iscomplexobj(row) else repr(float(x))
                              for x in row))
    return "\n".join(lines) + "\n"
