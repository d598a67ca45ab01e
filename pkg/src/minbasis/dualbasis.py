"""Dual minimal bases from kernels of trimmed Sylvester matrices.

A vector in the kernel of ``T_k(M)`` is the coefficient stack
``[v_0; ...; v_{k-1}]`` of a polynomial vector ``v`` with ``M v = 0`` and
``deg v <= k-1``.  Scanning ``k = 1, 2, ...`` and keeping, at each step, only
the kernel directions orthogonal to all ``lambda``-shifts of the vectors found
so far yields exactly ``alpha_{k-1}`` new null vectors of degree ``k-1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigenstructure import (certify_minimal_basis, indices_from_alpha, is_ftsr, minimal_indices,
                             trimmed_rank)
from .errors import (BoundViolation, DualityLost, ExtractionFailure, MinimalityRequired, NotFTSR,
                     OutsideNeighborhood, ProfileMismatch, ShapeMismatch)
from .polymat import DegreeProfile, PolyMatrix, distance_spectral
from .rank import min_norm_solve, null_space, svd_rank
from .sylvester import trimmed

#: relative tolerance on the coefficients of ``M N^T``
DUALITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class DualBasis:
    N: PolyMatrix
    source_indices: tuple[int, ...]

    def to_dict(self) -> dict:
        doc = self.N.to_dict()
        doc["source_indices"] = list(self.source_indices)
        return doc


def shift_stack(v: np.ndarray, width: int, shift: int, length: int) -> np.ndarray:
    """Coefficient stack of ``lambda**shift * v(lambda)`` padded to ``length`` blocks."""
    out = np.zeros(length * width, dtype=v.dtype)
    out[shift * width:shift * width + v.size] = v
    return out


def _orthonormal(cols: list[np.ndarray]) -> np.ndarray | None:
    if not cols:
        return None
    Q, _ = np.linalg.qr(np.column_stack(cols))
    return Q


def compute_dual(M: PolyMatrix, require_minimal: bool = True, tol: float | None = None) -> DualBasis:
    """A minimal basis ``N`` of the right null space of ``M``, rows by ascending degree.

    Raises
    ------
    MinimalityRequired
        ``require_minimal`` is set and ``M`` is not certified minimal.
    ExtractionFailure
        The number of new null vectors at some degree differs from ``alpha``.
    """
    if require_minimal and not certify_minimal_basis(M, tol):
        raise MinimalityRequired("compute_dual needs a certified minimal basis")
    rep = minimal_indices(M, tol)
    w = M.width
    dtype = M.stack.dtype
    found: list[np.ndarray] = []     # coefficient stacks, one per selected null vector
    for k in range(1, rep.d_prime + 2):
        want = rep.alpha[k - 1]
        K = null_space(trimmed(M, k), trimmed_rank(M, k, tol).rank)
        shifts = [shift_stack(v, w, s, k) for v in found for s in range(k - v.size // w + 1)]
        Q = _orthonormal(shifts)
        P = K if Q is None else K - Q @ (Q.conj().T @ K)
        if P.shape[1] == 0:
            got = 0
        else:
            U, s, _ = np.linalg.svd(P, full_matrices=False)
            got = int(np.count_nonzero(s > 0.5))
        if got != want:
            raise ExtractionFailure(
                f"degree {k - 1}: found {got} new null vectors, expected alpha = {want}")
        if want:
            found.extend(np.asarray(U[:, j], dtype=dtype) for j in range(want))
    degrees = tuple(v.size // w - 1 for v in found)
    profile = DegreeProfile(degrees, w)
    N = PolyMatrix(profile, np.concatenate([v.reshape(-1, w) for v in found]))
    return DualBasis(N, indices_from_alpha(rep.alpha))


def product_coefficients(M: PolyMatrix, N: PolyMatrix) -> np.ndarray:
    """Coefficients ``P_j`` of ``M(lambda) N(lambda)^T`` as a ``(deg+1) x m x n`` array."""
    if M.width != N.width:
        raise ShapeMismatch(f"widths differ: {M.width} vs {N.width}")
    A, B = M.coefficient_cube(), N.coefficient_cube()
    out = np.zeros((A.shape[0] + B.shape[0] - 1, M.m, N.m), dtype=np.result_type(A, B))
    for a in range(A.shape[0]):
        for b in range(B.shape[0]):
            out[a + b] += A[a] @ B[b].T
    return out


@dataclass(frozen=True)
class DualityCheck:
    holds: bool
    residual: float
    m_minimal: bool
    n_minimal: bool
    degree_sum_m: int
    degree_sum_n: int

    def __bool__(self):
        return self.holds


def verify_duality(M: PolyMatrix, N, tol: float | None = None) -> DualityCheck:
    """Check ``M N^T = 0``, minimality of both factors and equal degree sums.

    The residual is ``max_j ||P_j||_F / (||T_1(M)||_F ||T_1(N)||_F)`` over the
    coefficients ``P_j`` of ``M N^T``.
    """
    N = N.N if isinstance(N, DualBasis) else N
    if N.width != M.width or N.m != M.n:
        raise ShapeMismatch(f"N must be {M.n} x {M.width}, got {N.m} x {N.width}")
    P = product_coefficients(M, N)
    scale = np.linalg.norm(M.stack) * np.linalg.norm(N.stack)
    top = max(float(np.linalg.norm(Pj)) for Pj in P)
    residual = float(top / scale) if scale > 0 else (0.0 if top == 0 else math.inf)
    m_ok = bool(certify_minimal_basis(M, tol))
    n_ok = bool(certify_minimal_basis(N, tol))
    sm, sn = sum(M.row_degrees), sum(N.row_degrees)
    holds = residual <= DUALITY_TOL and m_ok and n_ok and sm == sn
    return DualityCheck(holds, residual, m_ok, n_ok, sm, sn)


def _scaled_sigma(M: PolyMatrix, k: int, j: int, tol=None) -> float:
    return trimmed_rank(M, k, tol).sigma(j) / math.sqrt(k)


@dataclass(frozen=True)
class Theta:
    theta1: float
    theta2: float
    case: str
    """``"a"``: ``k' > 1, t > 0``; ``"b"``: ``k' = 1, t > 0``; ``"c"``: ``t = 0``."""
    terms: dict


def theta_bounds(M: PolyMatrix, tol: float | None = None) -> Theta:
    """The two scaled singular-value minima governing dual-basis perturbation.

    Raises :class:`NotFTSR` unless ``M`` has full trimmed Sylvester rank.
    """
    if not is_ftsr(M, tol):
        raise NotFTSR("theta bounds need a full-trimmed-Sylvester-rank matrix")
    p = M.profile
    kp, t, m, s = p.k_prime, p.t, p.m, p.total
    row_term = {k: _scaled_sigma(M, k, k * m + s, tol) for k in (kp, kp + 1)}
    terms = {f"T{k}": v for k, v in row_term.items()}
    if kp > 1 and t > 0:
        col = _scaled_sigma(M, kp - 1, (kp - 1) * p.width, tol)
        terms[f"T{kp - 1}"] = col
        th2 = min(row_term[kp], row_term[kp + 1])
        return Theta(min(col, th2), th2, "a", terms)
    if t > 0:  # k' = 1
        th = min(row_term[1], row_term[2])
        return Theta(th, th, "b", terms)
    return Theta(min(row_term[kp], row_term[kp + 1]), row_term[kp + 1], "c", terms)


def _sigma_min_hr(N: PolyMatrix) -> float:
    return float(np.linalg.svd(N.highest_row_degree, compute_uv=False)[-1])


def dual_radius(M: PolyMatrix, N=None, tol: float | None = None) -> float:
    """``theta_1(M) sigma_n(N_hr) / (2 ||S_1(N)||_F)``."""
    N = compute_dual(M, tol=tol) if N is None else N
    N = N.N if isinstance(N, DualBasis) else N
    return 0.5 * theta_bounds(M, tol).theta1 * _sigma_min_hr(N) / float(np.linalg.norm(N.stack))


def _generic_order(M: PolyMatrix, N: PolyMatrix) -> PolyMatrix:
    """Rows of ``N`` reordered to ``(k'-1)^t, k'^(n-t)``."""
    p = M.profile
    target = (p.k_prime - 1,) * p.t + (p.k_prime,) * (p.n - p.t)
    if N.degrees == target:
        return N
    if sorted(N.degrees) != list(target):
        raise ProfileMismatch(f"dual degrees {N.degrees} differ from the generic {target}")
    order = sorted(range(N.m), key=lambda i: N.degrees[i])
    return PolyMatrix(DegreeProfile(target, N.width), np.concatenate([N.rows[i] for i in order]))


@dataclass(frozen=True, eq=False)
class PerturbedDual:
    dual: DualBasis
    rho2: float
    radius: float
    relative_change: float
    bound: float
    residual: float
    theta: Theta

    @property
    def slack(self) -> float:
        return self.bound - self.relative_change


def perturb_dual(M: PolyMatrix, N, Mt: PolyMatrix, tol: float | None = None) -> PerturbedDual:
    """Dual basis of ``Mt`` obtained by a minimum-norm correction of ``N``.

    ``N`` is split into ``X`` (the ``t`` rows of degree ``k'-1``) and ``Y``
    (degree ``k'``); the corrections solve
    ``T_k(Mt) S_1(dX^T) = -T_k(Mt - M) S_1(X^T)`` with ``k = k'`` for ``X``
    and ``k = k'+1`` for ``Y``.

    Raises
    ------
    NotFTSR
        ``M`` lacks full trimmed Sylvester rank.
    OutsideNeighborhood
        ``rho_2(M, Mt)`` is not below :func:`dual_radius`.
    RankDeficient
        A coefficient matrix of ``Mt`` lost full row rank.
    BoundViolation
        The relative change of ``N`` exceeds ``2 rho_2 / theta_2``.
    DualityLost
        The corrected basis fails :func:`verify_duality` against ``Mt``.
    """
    N = N.N if isinstance(N, DualBasis) else N
    M._same_space(Mt)
    theta = theta_bounds(M, tol)
    N = _generic_order(M, N)
    radius = 0.5 * theta.theta1 * _sigma_min_hr(N) / float(np.linalg.norm(N.stack))
    rho2 = distance_spectral(M, Mt)
    if rho2 >= radius:
        raise OutsideNeighborhood(f"rho_2 = {rho2:.3e} is not below the radius {radius:.3e}")
    dM = Mt - M
    kp, t, w = M.profile.k_prime, M.profile.t, M.width
    new_rows = []
    for rows, k in ((range(t), kp), (range(t, N.m), kp + 1)):
        rows = list(rows)
        if not rows:
            continue
        S1 = np.column_stack([N.rows[i].reshape(-1) for i in rows])
        rhs = -(trimmed(dM, k) @ S1)
        if not np.any(rhs):
            dS = np.zeros_like(S1)
        else:
            dS = min_norm_solve(trimmed(Mt, k), rhs, tol)
        new_rows.extend((S1 + dS).T)
    stack = np.concatenate([r.reshape(-1, w) for r in new_rows])
    Nt = PolyMatrix(N.profile, stack)
    rel = float(np.linalg.norm(Nt.stack - N.stack) / np.linalg.norm(N.stack))
    bound = 2.0 * rho2 / theta.theta2
    if rel > bound * (1 + 8 * np.finfo(float).eps):
        raise BoundViolation(f"relative change {rel:.6e} exceeds 2 rho_2 / theta_2 = {bound:.6e}")
    check = verify_duality(Mt, Nt, tol)
    if not check:
        raise DualityLost(f"perturbed dual fails verification (residual {check.residual:.3e}, "
                          f"minimal M~: {check.m_minimal}, minimal N~: {check.n_minimal})")
    return PerturbedDual(DualBasis(Nt, Nt.degrees), rho2, radius, rel, bound, check.residual, theta)


def shift_space(N, length: int) -> np.ndarray:
    """Rows: coefficient stacks of ``lambda**s * N_i`` for every shift fitting in ``length`` blocks."""
    N = N.N if isinstance(N, DualBasis) else N
    w = N.width
    out = [shift_stack(row.reshape(-1), w, s, length)
           for row, di in zip(N.rows, N.degrees) for s in range(length - di)]
    return np.array(out).reshape(-1, length * w)


def same_null_module(N1, N2, tol: float | None = None) -> bool:
    """True when both bases generate the same polynomial vectors up to the larger degree.

    Compares the ranks of the shift spaces of ``N1``, ``N2`` and of both
    stacked together.
    """
    N1 = N1.N if isinstance(N1, DualBasis) else N1
    N2 = N2.N if isinstance(N2, DualBasis) else N2
    length = max(N1.profile.d, N2.profile.d) + 1
    A, B = shift_space(N1, length), shift_space(N2, length)
    ra, rb = svd_rank(A, tol).rank, svd_rank(B, tol).rank
    return ra == rb == svd_rank(np.vstack([A, B]), tol).rank
