"""Robustness radii of minimal bases and FTSR matrices.

All radii are measured in ``rho_2(M, Mt) = ||T_1(M) - T_1(Mt)||_2`` and are
built from the smallest relevant singular value of some ``T_k(M)``, scaled by
``1/sqrt(k)`` because ``||T_k(E)||_2 <= sqrt(k) ||T_1(E)||_2``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .dualbasis import Theta, compute_dual, dual_radius, theta_bounds
from .eigenstructure import (certify_minimal_basis, certify_minimal_basis_full_rank,
                             classical_check, classical_grid, is_ftsr, trimmed_rank)
from .errors import (HypothesisError, HypothesisFailed, InputError, NotFTSR, NotRobustBasis,
                     PreconditionFailed)
from .polymat import PolyMatrix, distance_spectral, spectral_norm
from .rank import singular_values, svd_rank
from .sylvester import build_trimmed, trimmed

#: slack, in units in the last place, for floating comparisons of proven inequalities
ULP_SLACK = 8


def _ulps(x: float, n: int = ULP_SLACK) -> float:
    return n * float(np.spacing(abs(x)))


@dataclass(frozen=True)
class Radius:
    value: float
    k: int
    branch: str | None = None


def minimal_basis_radius(M: PolyMatrix, tol: float | None = None) -> Radius:
    """``sigma_{km+sum d}(T_k)/sqrt(k)`` for the first ``k`` with ``T_k`` of full row rank.

    Every ``Mt`` closer than this in ``rho_2`` is again a minimal basis with a
    full-rank leading row-wise coefficient matrix.

    Raises
    ------
    NotRobustBasis
        ``M`` is not a minimal basis, or it is one with ``rank(M_dbar) < m``
        (such bases have non-minimal matrices arbitrarily close).
    """
    cert = certify_minimal_basis_full_rank(M, tol)
    if not cert:
        if certify_minimal_basis(M, tol):
            raise NotRobustBasis("minimal basis with rank(M_dbar) < m has no robustness radius")
        raise NotRobustBasis("not a minimal basis")
    k = cert.k
    return Radius(trimmed_rank(M, k, tol).sigma(k * M.m + M.profile.total) / math.sqrt(k), k)


def ftsr_radius(M: PolyMatrix, tol: float | None = None) -> Radius:
    """Radius of the FTSR-preserving neighbourhood.

    Branch ``"a"`` (``k' > 1`` and ``t > 0``) takes the smaller of the scaled
    smallest singular values of ``T_{k'-1}`` and ``T_{k'}``; branch ``"b"``
    uses ``T_{k'}`` only.
    """
    res = is_ftsr(M, tol)
    if not res:
        raise NotFTSR("ftsr_radius needs a full-trimmed-Sylvester-rank matrix")
    p = M.profile
    kp = p.k_prime
    top = trimmed_rank(M, kp, tol).sigma(kp * p.m + p.total) / math.sqrt(kp)
    if kp > 1 and p.t > 0:
        low = trimmed_rank(M, kp - 1, tol).sigma((kp - 1) * p.width) / math.sqrt(kp - 1)
        return Radius(min(low, top), kp, "a")
    return Radius(top, kp, "b")


def _from_t1(M: PolyMatrix, A: np.ndarray) -> PolyMatrix:
    """Inverse of ``T_1``: every coefficient appears exactly once in ``T_1``."""
    T = build_trimmed(M, 1)
    idx = [M.row_start[i] + p for i, p in T.row_map]
    stack = np.empty_like(M.stack)
    stack[idx] = A
    return PolyMatrix(M.profile, stack)


@dataclass(frozen=True, eq=False)
class SharpBoundary:
    radius: float
    boundary: PolyMatrix
    rho2: float

    @property
    def ulps_off(self) -> float:
        return abs(self.rho2 - self.radius) / float(np.spacing(self.radius))


def sharp_radius_and_boundary(M: PolyMatrix, tol: float | None = None) -> SharpBoundary:
    """Exact FTSR radius when ``sum d_i <= n`` and a matrix on its boundary.

    The boundary matrix subtracts the smallest singular triplet from
    ``T_1(M)``.  Rounding the deflated coefficients perturbs ``rho_2`` by about
    ``eps ||T_1||``, which can be many ulps of a small radius.  A handful of
    scalings of the rank-one term near 1 are tried first; the best one is then
    polished by ulp-sized coefficient moves that keep ``T_1`` numerically
    rank deficient while bringing ``rho_2`` within 2 ulps of the radius.

    Raises
    ------
    HypothesisFailed
        ``sum d_i > n``.
    NotFTSR
        ``T_1(M)`` does not have full row rank.
    """
    p = M.profile
    if p.total > p.n:
        raise HypothesisFailed(f"sum of degrees {p.total} exceeds n = {p.n}")
    dec = trimmed_rank(M, 1, tol)
    if not dec.full_row_rank:
        raise NotFTSR("T_1(M) does not have full row rank")
    T1 = trimmed(M, 1)
    r = T1.shape[0]
    sigma = dec.sigma(r)
    U, _, Vh = np.linalg.svd(T1)
    rank_one = np.outer(U[:, r - 1], Vh[r - 1])
    eps = float(np.finfo(float).eps)

    def attempt(scale):
        Mt = _from_t1(M, T1 - (sigma * scale) * rank_one)
        return Mt, distance_spectral(M, Mt)

    tried = []
    Mt, rho = attempt(1.0)
    tried.append((abs(rho - sigma), 1.0, Mt, rho))
    centre = sigma / rho if rho > 0 else 1.0
    for j in (0, 1, -1, 2, -2, 3, -3, 4, -4, 6, -6, 8, -8, 12, -12):
        if tried and min(t[0] for t in tried) <= _ulps(sigma, 2):
            break
        s = centre * (1 + j * eps)
        Mt, rho = attempt(s)
        tried.append((abs(rho - sigma), s, Mt, rho))
    best = min((_boundary_key(M, Mt, sigma, tol), i) for i, (_, _, Mt, _) in enumerate(tried))
    Mt = _nudge(M, tried[best[1]][2], sigma, tol)
    return SharpBoundary(sigma, Mt, distance_spectral(M, Mt))


def _boundary_key(M: PolyMatrix, Mt: PolyMatrix, target: float, tol=None):
    """``(excess of sigma_min(T_1(Mt)) over the rank tolerance, ulps between rho_2 and target)``."""
    dec = svd_rank(trimmed(Mt, 1), tol)
    excess = max(0.0, dec.sigma(dec.shape[0]) - dec.tolerance)
    return excess, abs(distance_spectral(M, Mt) - target) / float(np.spacing(target))


def _nudge(M: PolyMatrix, Mt: PolyMatrix, target: float, tol=None, steps: int = 64) -> PolyMatrix:
    """Greedy one-ulp moves of single entries of ``Mt`` toward a rank-deficient ``T_1(Mt)``
    with ``rho_2(M, Mt)`` within 2 ulps of ``target``.

    When the radius is much smaller than the coefficients, one ulp of a
    coefficient is many ulps of the radius, and rounding the deflated matrix
    can leave its smallest singular value just above the rank tolerance, so
    rescaling alone does not always land on the boundary.  Every move is
    scored exactly; the search stops when no move improves the score.
    """
    key = _boundary_key(M, Mt, target, tol)
    stack = Mt.stack.copy()
    for _ in range(steps):
        if key[0] == 0 and key[1] <= 2:
            break
        best = None
        for idx in np.ndindex(stack.shape):
            for direction in (np.inf, -np.inf):
                trial = stack.copy()
                re = np.nextafter(trial.real[idx], direction)
                trial[idx] = re + 1j * trial.imag[idx] if np.iscomplexobj(trial) else re
                cand = PolyMatrix(M.profile, trial)
                k = _boundary_key(M, cand, target, tol)
                if k < key and (best is None or k < best[0]):
                    best = (k, trial)
        if best is None:
            break
        key, stack = best
    if not (key[0] == 0 and key[1] <= 2):
        key, stack = _joint_moves(M, stack, key, target, tol)
    return PolyMatrix(M.profile, stack)


def _joint_moves(M: PolyMatrix, stack: np.ndarray, key, target: float, tol=None, span: int = 2):
    """Exhaustive moves of up to ``span`` ulps on the four entries that matter most.

    To first order ``rho_2 - target`` is ``u^T E v`` for the rounding error
    ``E``, so combined moves on the entries with the largest ``|u_i v_j|``
    reach a much finer set of values than single-entry steps do.
    """
    U, _, Vh = np.linalg.svd(M.stack - stack)
    weight = np.abs(np.outer(U[:, 0], Vh[0]))
    top = [np.unravel_index(i, stack.shape) for i in np.argsort(weight, axis=None)[::-1][:4]]
    best_key, best = key, stack
    for offsets in itertools.product(range(-span, span + 1), repeat=len(top)):
        if not any(offsets):
            continue
        trial = stack.copy()
        for idx, off in zip(top, offsets):
            re = trial.real[idx] + off * np.spacing(trial.real[idx])
            trial[idx] = re + 1j * trial.imag[idx] if np.iscomplexobj(trial) else re
        k = _boundary_key(M, PolyMatrix(M.profile, trial), target, tol)
        if k < best_key:
            best_key, best = k, trial
    return best_key, best


@dataclass(frozen=True)
class ClassicalBound:
    lower_bound: float
    min_sampled: float
    sigma_m_leading: float
    argmin: complex
    holds: bool

    def __bool__(self):
        return self.holds


def classical_bound_check(M: PolyMatrix, grid=None, tol: float | None = None) -> ClassicalBound:
    """Compare ``sigma_{d'm+sum d}(T_{d'})`` with ``sigma_m`` of ``M(lambda_0)`` and ``M_dbar``.

    ``grid`` defaults to the origin plus 64 points on each of the circles of
    radius 0.5, 1 and 2.  Comparisons allow 8 ulps of slack.

    Raises :class:`PreconditionFailed` unless ``M`` is a minimal basis with
    ``rank(M_dbar) = m``.
    """
    cert = certify_minimal_basis_full_rank(M, tol)
    if not cert:
        raise PreconditionFailed("the bound needs a minimal basis with rank(M_dbar) = m")
    dp = cert.k
    lower = trimmed_rank(M, dp, tol).sigma(dp * M.m + M.profile.total)
    grid = classical_grid() if grid is None else grid
    cc = classical_check(M, grid, tol)
    lead = float(singular_values(M.leading_rowwise)[M.m - 1])
    holds = lower <= cc.min_sigma + _ulps(cc.min_sigma) and lower <= lead + _ulps(lead)
    return ClassicalBound(lower, cc.min_sigma, lead, cc.argmin, holds)


@dataclass(frozen=True)
class SandwichCheck:
    holds: bool
    norm_t1: float
    norm_tk: float
    k: int

    def __bool__(self):
        return self.holds


def norm_sandwich_check(M: PolyMatrix, k: int) -> SandwichCheck:
    """``||T_1|| <= ||T_k|| <= sqrt(k) ||T_1||`` in the spectral norm (8-ulp slack)."""
    if k < 1:
        raise InputError("k must be positive")
    n1 = spectral_norm(M)
    Tk = trimmed(M, k)
    nk = float(singular_values(Tk)[0]) if np.any(Tk) else 0.0
    up = math.sqrt(k) * n1
    holds = n1 <= nk + _ulps(nk) and nk <= up + _ulps(up)
    return SandwichCheck(holds, n1, nk, k)


@dataclass(frozen=True)
class RobustnessReport:
    """Every radius, or ``None`` where its hypothesis fails."""

    minimal_basis_radius: float | None
    minimal_basis_k: int | None
    ftsr_radius: float | None
    ftsr_branch: str | None
    sharp_radius: float | None
    theta1: float | None
    theta2: float | None
    theta_case: str | None
    dual_radius: float | None
    classical_lower_bound: float | None
    classical_min_sampled: float | None

    _KEYS = {
        "minimal_basis_radius": "minimalBasisRadius",
        "minimal_basis_k": "minimalBasisK",
        "ftsr_radius": "ftsrRadius",
        "ftsr_branch": "ftsrBranch",
        "sharp_radius": "sharpRadius",
        "theta1": "theta1",
        "theta2": "theta2",
        "theta_case": "thetaCase",
        "dual_radius": "dualRadius",
        "classical_lower_bound": "classicalLowerBound",
        "classical_min_sampled": "classicalMinSampled",
    }

    def to_dict(self) -> dict:
        return {v: getattr(self, k) for k, v in self._KEYS.items()}

    def to_text(self) -> str:
        lines = []
        for key, val in self.to_dict().items():
            lines.append(f"{key}: {'n/a' if val is None else val}")
        return "\n".join(lines) + "\n"


def _try(fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except HypothesisError:
        return None


def robustness_report(M: PolyMatrix, grid=None, tol: float | None = None) -> RobustnessReport:
    mb = _try(minimal_basis_radius, M, tol)
    fr = _try(ftsr_radius, M, tol)
    sh = _try(sharp_radius_and_boundary, M, tol)
    th: Theta | None = _try(theta_bounds, M, tol)
    dr = None
    if th is not None:
        dual = _try(compute_dual, M, tol=tol)
        dr = None if dual is None else dual_radius(M, dual, tol)
    cb = _try(classical_bound_check, M, grid, tol)
    return RobustnessReport(
        minimal_basis_radius=None if mb is None else mb.value,
        minimal_basis_k=None if mb is None else mb.k,
        ftsr_radius=None if fr is None else fr.value,
        ftsr_branch=None if fr is None else fr.branch,
        sharp_radius=None if sh is None else sh.radius,
        theta1=None if th is None else th.theta1,
        theta2=None if th is None else th.theta2,
        theta_case=None if th is None else th.case,
        dual_radius=dr,
        classical_lower_bound=None if cb is None else cb.lower_bound,
        classical_min_sampled=None if cb is None else cb.min_sampled,
    )


__all__ = [
    "ClassicalBound", "Radius", "RobustnessReport", "SandwichCheck", "SharpBoundary", "Theta",
    "classical_bound_check", "dual_radius", "ftsr_radius", "minimal_basis_radius",
    "norm_sandwich_check", "robustness_report", "sharp_radius_and_boundary", "theta_bounds",
]
