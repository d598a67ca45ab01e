"""Numerical rank, minimum-norm solves and an exact rational rank oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import ConvergenceFailure, InputError, RankDeficient, ResidualTooLarge

EPS = float(np.finfo(np.float64).eps)
#: rank decisions with ``sigma_r / sigma_{r+1}`` below this are flagged as ill-separated
GAP_WARNING = 1e3


@dataclass(frozen=True, eq=False)
class RankDecision:
    rank: int
    singular_values: np.ndarray
    tolerance: float
    gap_ratio: float
    shape: tuple[int, int]

    @property
    def full_row_rank(self) -> bool:
        return self.rank == self.shape[0]

    @property
    def full_column_rank(self) -> bool:
        return self.rank == self.shape[1]

    @property
    def full_rank(self) -> bool:
        return self.rank == min(self.shape)

    @property
    def well_separated(self) -> bool:
        return self.gap_ratio >= GAP_WARNING

    def sigma(self, j: int) -> float:
        """1-based ``sigma_j``; raises ``IndexError`` outside ``1..min(shape)``."""
        if not 1 <= j <= len(self.singular_values):
            raise IndexError(f"sigma_{j} undefined for a {self.shape[0]}x{self.shape[1]} matrix")
        return float(self.singular_values[j - 1])


def singular_values(A) -> np.ndarray:
    A = np.asarray(A)
    if A.size == 0:
        return np.zeros(0)
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD did not converge on a {A.shape} matrix") from exc


def svd_rank(A, tol: float | None = None) -> RankDecision:
    """Numerical rank ``#{sigma_i > tau}``.

    The default threshold is ``tau = max(rows, cols) * sigma_1 * eps``; for the
    zero matrix ``tau = eps``.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.size == 0:
        raise InputError(f"svd_rank needs a nonempty 2-D array, got shape {A.shape}")
    s = singular_values(A)
    if tol is None:
        tau = max(A.shape) * s[0] * EPS if s[0] > 0 else EPS
    else:
        if tol <= 0:
            raise InputError("rank tolerance must be positive")
        tau = float(tol)
    r = int(np.count_nonzero(s > tau))
    if r == len(s) or r == 0:
        gap = math.inf
    elif s[r] == 0:
        gap = math.inf
    else:
        gap = float(s[r - 1] / s[r])
    return RankDecision(r, s, float(tau), gap, A.shape)


def _as_fraction(x) -> Fraction:
    if isinstance(x, complex) or np.iscomplexobj(x):
        if complex(x).imag != 0:
            raise InputError("exact_rank works over the rationals; got a complex entry")
        x = complex(x).real
    if isinstance(x, (np.floating, float)):
        if not math.isfinite(x):
            raise InputError("cannot take the exact rank of a non-finite entry")
        return Fraction(float(x))
    if isinstance(x, np.integer):
        return Fraction(int(x))
    return Fraction(x)


def exact_rank(A) -> int:
    """Rank over the rationals by fraction-free elimination.

    Entries may be ints, :class:`~fractions.Fraction` or binary floats (taken
    at their exact dyadic value).  Each row is scaled to integers first.
    """
    rows = []
    for row in (A.tolist() if isinstance(A, np.ndarray) else A):
        fr = [_as_fraction(x) for x in row]
        den = math.lcm(*(f.denominator for f in fr)) if fr else 1
        rows.append([int(f * den) for f in fr])
    if not rows or not rows[0]:
        return 0
    return _kernels.bareiss_rank(rows)


def min_norm_solve(A, B, tol: float | None = None, rtol: float = 1e-10) -> np.ndarray:
    """Minimum-Frobenius-norm solution of ``A X = B`` for full-row-rank ``A``.

    Uses the SVD pseudoinverse.  Raises :class:`RankDeficient` when ``A`` lacks
    full row rank and :class:`ResidualTooLarge` when
    ``||AX - B||_F > rtol * ||B||_F``.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    squeeze = B.ndim == 1
    if squeeze:
        B = B[:, None]
    if A.shape[0] != B.shape[0]:
        raise InputError(f"incompatible shapes {A.shape} and {B.shape}")
    try:
        U, s, Vh = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure("SVD did not converge") from exc
    dec = svd_rank(A, tol)
    if dec.rank < A.shape[0]:
        raise RankDeficient(f"A ({A.shape[0]}x{A.shape[1]}) has rank {dec.rank}")
    X = Vh.conj().T @ ((U.conj().T @ B) / s[:, None])
    res = np.linalg.norm(A @ X - B)
    nb = np.linalg.norm(B)
    if res > rtol * nb:
        raise ResidualTooLarge(f"residual {res:.3e} exceeds {rtol:g} * ||B|| = {rtol * nb:.3e}")
    return X[:, 0] if squeeze else X


def null_space(A, rank: int | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the right null space of ``A``."""
    A = np.asarray(A)
    if rank is None:
        rank = svd_rank(A).rank
    try:
        _, _, Vh = np.linalg.svd(A, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure("SVD did not converge") from exc
    return Vh[rank:].conj().T
