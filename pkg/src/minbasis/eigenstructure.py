"""Right minimal indices, minimal-basis certificates and the FTSR test.

Everything here is driven by the ranks ``r_k`` of the trimmed Sylvester
matrices ``T_k(M)`` and the right nullities ``n_k = k(m+n) - r_k``.  The
number of right minimal indices equal to ``k`` is the second difference

    alpha_0 = n_1,   alpha_k = (n_{k+1} - n_k) - (n_k - n_{k-1}),

and the largest index ``d'`` is the first ``k`` with ``n_{k+1} - n_k = n``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistentSequence, InputError, NotFTSR, NotFullNormalRank
from .polymat import DegreeProfile, PolyMatrix, evaluate
from .rank import GAP_WARNING, RankDecision, svd_rank
from .sylvester import trimmed


class RankGapWarning(UserWarning):
    """A rank decision had ``sigma_r / sigma_{r+1}`` below ``GAP_WARNING``."""


def trimmed_rank(M: PolyMatrix, k: int, tol: float | None = None) -> RankDecision:
    """Memoized :func:`svd_rank` of ``T_k(M)``."""
    key = ("rank", k, tol)
    dec = M._memo.get(key)
    if dec is None:
        dec = svd_rank(trimmed(M, k), tol)
        if not dec.well_separated:
            warnings.warn(f"ill-separated rank decision for T_{k}: rank {dec.rank}, "
                          f"gap ratio {dec.gap_ratio:.3g}", RankGapWarning, stacklevel=3)
        M._memo[key] = dec
    return dec


def rank_sequence(M: PolyMatrix, K: int, tol: float | None = None):
    """``(r, n)`` for ``k = 1..K`` as two lists."""
    if K < 1:
        raise InputError("K must be at least 1")
    r = [trimmed_rank(M, k, tol).rank for k in range(1, K + 1)]
    n = [k * M.width - rk for k, rk in zip(range(1, K + 1), r)]
    return r, n


@dataclass(frozen=True)
class GenericEigenstructure:
    k_prime: int
    t: int
    indices: tuple[int, ...]
    infinite_divisor_degrees: tuple[int, ...]


def generic_eigenstructure(profile: DegreeProfile) -> GenericEigenstructure:
    """Eigenstructure of a full-trimmed-Sylvester-rank matrix with this profile.

    ``t`` right minimal indices equal ``k' - 1`` and ``n - t`` equal ``k'``;
    each row with ``d_i < d`` contributes one infinite elementary divisor of
    degree ``d - d_i``.
    """
    kp, t, d = profile.k_prime, profile.t, profile.d
    indices = (kp - 1,) * t + (kp,) * (profile.n - t)
    return GenericEigenstructure(kp, t, indices, tuple(d - di for di in profile.degrees if di < d))


@dataclass(frozen=True)
class _IndexSearch:
    r: tuple[int, ...]        # r_1 .. r_{d'+1}
    n_null: tuple[int, ...]   # n_1 .. n_{d'+1}
    alpha: tuple[int, ...]    # alpha_0 .. alpha_{d'}
    d_prime: int
    min_gap: float


def _search(M: PolyMatrix, tol) -> _IndexSearch:
    w, n = M.width, M.n
    kmax = M.profile.total + 1
    r, nn = [0], [0]
    gap = math.inf
    d_prime = None
    for k in range(1, kmax + 2):
        dec = trimmed_rank(M, k, tol)
        gap = min(gap, dec.gap_ratio)
        r.append(dec.rank)
        nn.append(k * w - dec.rank)
        if nn[k] - nn[k - 1] == n:
            d_prime = k - 1
            break
    if d_prime is None:
        raise NotFullNormalRank(
            f"n_(k+1) - n_k never reached n = {n} for k <= {kmax}; "
            "M(lambda) is not of full row normal rank (or the ranks are numerically unreliable)")
    alpha = [nn[1]]
    for k in range(1, d_prime + 1):
        alpha.append((nn[k + 1] - nn[k]) - (nn[k] - nn[k - 1]))
    if min(alpha) < 0:
        raise NotFullNormalRank(f"negative multiplicity in alpha = {alpha}")
    if sum(alpha) != n:
        raise InconsistentSequence(f"sum(alpha) = {sum(alpha)} differs from n = {n}")
    if sum(k * a for k, a in enumerate(alpha)) != r[d_prime] - M.m * d_prime:
        raise InconsistentSequence("sum of indices differs from r_d' - m d'")
    # r-form of the recurrence as a cross-check
    for k in range(1, d_prime + 1):
        if alpha[k] != (r[k] - r[k - 1]) - (r[k + 1] - r[k]):
            raise InconsistentSequence(f"rank and nullity forms disagree at k = {k}")
    return _IndexSearch(tuple(r[1:]), tuple(nn[1:]), tuple(alpha), d_prime, gap)


def indices_from_alpha(alpha) -> tuple[int, ...]:
    return tuple(k for k, a in enumerate(alpha) for _ in range(a))


@dataclass(frozen=True)
class MinimalBasisCertificate:
    """``rank(M_hr) = m`` and ``r_{d'} - m d' = sum of exact row degrees``."""

    holds: bool
    rank_hr: int
    lhs: int | None
    rhs: int
    d_prime: int | None
    reason: str = ""

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class FullRankCertificate:
    """Smallest ``k`` with ``T_k`` of full row rank (``None`` when there is none)."""

    holds: bool
    k: int | None
    searched_up_to: int

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class FTSRResult:
    holds: bool
    k_prime: int
    t: int
    branch: str
    """``"two-ranks"``: ``k' > 1, t > 0``; ``"one-rank"``: ``k' = 1`` or ``t = 0``."""
    ranks: dict = field(default_factory=dict)
    shapes: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


def certify_minimal_basis(M: PolyMatrix, tol: float | None = None) -> MinimalBasisCertificate:
    rank_hr = svd_rank(M.highest_row_degree, tol).rank if M.degree >= 0 else 0
    rhs = sum(M.row_degrees)
    if rank_hr < M.m:
        return MinimalBasisCertificate(False, rank_hr, None, rhs, None, "M_hr is rank deficient")
    try:
        s = _search(M, tol)
    except NotFullNormalRank as exc:
        return MinimalBasisCertificate(False, rank_hr, None, rhs, None, str(exc))
    lhs = (s.r[s.d_prime - 1] if s.d_prime > 0 else 0) - M.m * s.d_prime
    reason = "" if lhs == rhs else f"r_d' - m d' = {lhs} but the row degrees sum to {rhs}"
    return MinimalBasisCertificate(lhs == rhs, rank_hr, lhs, rhs, s.d_prime, reason)


def certify_minimal_basis_full_rank(M: PolyMatrix, tol: float | None = None) -> FullRankCertificate:
    """Minimal basis with ``rank(M_dbar) = m`` iff some ``T_k`` has full row rank.

    ``T_k`` is taller than wide for ``k < k'`` so the scan starts at ``k'``; the
    first hit is the largest right minimal index ``d'``.
    """
    kmax = M.profile.total + 1
    for k in range(M.profile.k_prime, kmax + 1):
        if trimmed_rank(M, k, tol).full_row_rank:
            return FullRankCertificate(True, k, kmax)
    return FullRankCertificate(False, None, kmax)


def is_ftsr(M: PolyMatrix, tol: float | None = None) -> FTSRResult:
    """Full-trimmed-Sylvester-rank test using at most two ranks."""
    kp, t = M.profile.k_prime, M.profile.t
    top = trimmed_rank(M, kp, tol)
    ranks = {kp: top.rank}
    shapes = {kp: top.shape}
    if kp > 1 and t > 0:
        low = trimmed_rank(M, kp - 1, tol)
        ranks[kp - 1] = low.rank
        shapes[kp - 1] = low.shape
        return FTSRResult(low.full_column_rank and top.full_row_rank, kp, t, "two-ranks",
                          ranks, shapes)
    return FTSRResult(top.full_row_rank, kp, t, "one-rank", ranks, shapes)


@dataclass(frozen=True)
class EigenstructureReport:
    r: tuple[int, ...]
    n_null: tuple[int, ...]
    alpha: tuple[int, ...]
    d_prime: int
    minimal_indices: tuple[int, ...]
    is_minimal_basis: bool
    certificate: MinimalBasisCertificate
    is_ftsr: bool
    k_prime: int
    t: int
    generic_indices: tuple[int, ...]
    min_gap_ratio: float

    @property
    def matches_generic(self) -> bool:
        return self.minimal_indices == self.generic_indices

    def to_dict(self) -> dict:
        c = self.certificate
        return {
            "r": list(self.r),
            "nNull": list(self.n_null),
            "alpha": list(self.alpha),
            "dPrime": self.d_prime,
            "minimalIndices": list(self.minimal_indices),
            "isMinimalBasis": self.is_minimal_basis,
            "minimalBasisCertificate": {"rankHr": c.rank_hr, "lhs": c.lhs, "rhs": c.rhs},
            "isFTSR": self.is_ftsr,
            "kPrime": self.k_prime,
            "t": self.t,
            "genericIndices": list(self.generic_indices),
            "matchesGeneric": self.matches_generic,
            "minGapRatio": None if math.isinf(self.min_gap_ratio) else self.min_gap_ratio,
        }


def minimal_indices(M: PolyMatrix, tol: float | None = None) -> EigenstructureReport:
    """Full eigenstructure report of a matrix of full row normal rank.

    The rank sequence is extended one step past ``d'`` so that both forms of
    the multiplicity recurrence can be cross-checked.

    Raises
    ------
    NotFullNormalRank
        The stopping rule did not fire by ``k = sum(d_i) + 1`` or some
        multiplicity came out negative.
    InconsistentSequence
        The degree-sum identity failed.
    """
    s = _search(M, tol)
    cert = certify_minimal_basis(M, tol)
    ftsr = is_ftsr(M, tol)
    return EigenstructureReport(
        r=s.r, n_null=s.n_null, alpha=s.alpha, d_prime=s.d_prime,
        minimal_indices=indices_from_alpha(s.alpha),
        is_minimal_basis=cert.holds, certificate=cert, is_ftsr=ftsr.holds,
        k_prime=M.profile.k_prime, t=M.profile.t,
        generic_indices=generic_eigenstructure(M.profile).indices,
        min_gap_ratio=s.min_gap)


def infinite_elementary_divisors(M: PolyMatrix, tol: float | None = None) -> tuple[int, ...]:
    """Degrees ``d - d_i`` (``d_i < d``), valid only for FTSR matrices.

    Cross-checked against ``rank(M_d) = #{i : d_i = d}``.
    """
    if not is_ftsr(M, tol):
        raise NotFTSR("infinite elementary divisors are only predicted for FTSR matrices")
    gen = generic_eigenstructure(M.profile)
    expected = sum(1 for di in M.degrees if di == M.profile.d)
    got = svd_rank(M.leading, tol).rank
    if got != expected:
        raise InconsistentSequence(f"rank(M_d) = {got}, expected {expected}")
    return gen.infinite_divisor_degrees


@dataclass(frozen=True)
class ClassicalCheck:
    min_sigma: float
    argmin: complex
    row_reduced: bool


def classical_check(M: PolyMatrix, samples, tol: float | None = None) -> ClassicalCheck:
    """Sampled necessary test: ``min sigma_m(M(lambda_0))`` and row-reducedness."""
    samples = list(samples)
    if not samples:
        raise InputError("classical_check needs at least one sample point")
    best, arg = math.inf, None
    for lam in samples:
        s = np.linalg.svd(evaluate(M, lam), compute_uv=False)[M.m - 1]
        if s < best:
            best, arg = float(s), lam
    reduced = M.degree >= 0 and svd_rank(M.highest_row_degree, tol).rank == M.m
    return ClassicalCheck(best, complex(arg), reduced)


def classical_grid(radii=(0.5, 1.0, 2.0), points: int = 64) -> list[complex]:
    """Concentric circles of ``points`` equispaced nodes each, plus the origin."""
    grid = [0j]
    for rho in radii:
        grid.extend(rho * np.exp(2j * np.pi * np.arange(points) / points))
    return [complex(z) for z in grid]


__all__ = [
    "ClassicalCheck", "EigenstructureReport", "FTSRResult", "FullRankCertificate",
    "GAP_WARNING", "GenericEigenstructure", "MinimalBasisCertificate", "RankGapWarning",
    "certify_minimal_basis", "certify_minimal_basis_full_rank", "classical_check",
    "classical_grid", "generic_eigenstructure", "indices_from_alpha",
    "infinite_elementary_divisors", "is_ftsr", "minimal_indices", "rank_sequence",
    "trimmed_rank",
]
