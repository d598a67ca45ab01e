"""Polynomial matrices with prescribed row-degree bounds.

A matrix ``M(lambda)`` of size ``m x (m+n)`` is stored row by row: row ``i``
holds exactly ``d_i + 1`` coefficient vectors ``R_{i,0}, ..., R_{i,d_i}``,
where ``d = (d_1, ..., d_m)`` is its :class:`DegreeProfile`.  The profile is a
bound, not the exact degree, so trailing zero coefficients are allowed.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import DegreeTooSmall, InvalidProfile, ProfileMismatch, ShapeMismatch

#: relative threshold of the exact-degree rule (see :meth:`PolyMatrix.row_degrees`)
ZERO_TOL = 1e-12


@dataclass(frozen=True)
class DegreeProfile:
    """Row-degree bounds ``degrees`` of an ``m x width`` polynomial matrix.

    Only the structural requirements ``m >= 1``, ``width > m`` and
    nonnegative degrees are enforced here; the standing assumption
    ``max(degrees) >= 1`` is checked by :func:`make_poly_matrix` so that
    constant dual bases remain representable.
    """

    degrees: tuple[int, ...]
    width: int

    def __post_init__(self):
        degs = tuple(int(x) for x in self.degrees)
        object.__setattr__(self, "degrees", degs)
        if len(degs) < 1:
            raise InvalidProfile("a profile needs at least one row (m >= 1)")
        if any(x < 0 for x in degs):
            raise InvalidProfile(f"row degrees must be nonnegative, got {degs}")
        if int(self.width) <= len(degs):
            raise InvalidProfile(
                f"width {self.width} must exceed the number of rows {len(degs)} (n >= 1)")
        object.__setattr__(self, "width", int(self.width))

    @classmethod
    def from_mn(cls, m: int, n: int, degrees: Sequence[int]) -> "DegreeProfile":
        if m < 1 or n < 1:
            raise InvalidProfile(f"need m >= 1 and n >= 1, got m={m}, n={n}")
        if len(degrees) != m:
            raise InvalidProfile(f"expected {m} degrees, got {len(degrees)}")
        return cls(tuple(degrees), m + n)

    @classmethod
    def parse(cls, text: str) -> "DegreeProfile":
        """Parse the command-line syntax ``m,n:d1,...,dm``."""
        try:
            head, tail = text.split(":")
            m, n = (int(x) for x in head.split(","))
            degrees = [int(x) for x in tail.split(",") if x.strip()]
        except ValueError as exc:
            raise InvalidProfile(f"cannot parse profile {text!r}; expected m,n:d1,...,dm") from exc
        return cls.from_mn(m, n, degrees)

    @property
    def m(self) -> int:
        return len(self.degrees)

    @property
    def n(self) -> int:
        return self.width - self.m

    @property
    def d(self) -> int:
        return max(self.degrees)

    @property
    def total(self) -> int:
        return sum(self.degrees)

    @property
    def k_prime(self) -> int:
        """``ceil(total / n)``: first ``k`` at which ``T_k`` is not taller than wide."""
        return -(-self.total // self.n)

    @property
    def t(self) -> int:
        return self.n * self.k_prime - self.total

    @property
    def n_coefficients(self) -> int:
        return sum(x + 1 for x in self.degrees)

    def check_standing(self) -> None:
        if self.d < 1:
            raise InvalidProfile("at least one row degree bound must be positive")

    def label(self) -> str:
        return f"{self.m},{self.n}:" + ",".join(str(x) for x in self.degrees)


@dataclass(frozen=True, eq=False)
class CoefficientViews:
    leading_rowwise: np.ndarray
    highest_row_degree: np.ndarray
    leading: np.ndarray


def _readonly(a):
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PolyMatrix:
    """Immutable polynomial matrix in ``F[lambda]^{m x (m+n)}_d``.

    ``stack`` holds every coefficient vector, row after row and by increasing
    power inside a row; ``rows[i]`` is the ``(d_i + 1) x width`` view of row
    ``i``.  Instances are hashed by identity and memoize derived matrices in
    ``_memo``.
    """

    profile: DegreeProfile
    stack: np.ndarray
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        a = np.array(self.stack, dtype=np.complex128 if np.iscomplexobj(self.stack) else np.float64,
                     order="C", copy=True)
        if a.shape != (self.profile.n_coefficients, self.profile.width):
            raise ShapeMismatch(
                f"coefficient stack has shape {a.shape}, expected "
                f"{(self.profile.n_coefficients, self.profile.width)}")
        object.__setattr__(self, "stack", _readonly(a))

    # -- shape ---------------------------------------------------------------
    @property
    def m(self) -> int:
        return self.profile.m

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def width(self) -> int:
        return self.profile.width

    @property
    def degrees(self) -> tuple[int, ...]:
        return self.profile.degrees

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.stack)

    @property
    def field(self) -> str:
        return "complex" if self.is_complex else "real"

    @cached_property
    def row_start(self) -> tuple[int, ...]:
        starts, s = [], 0
        for di in self.degrees:
            starts.append(s)
            s += di + 1
        return tuple(starts)

    @property
    def rows(self) -> list[np.ndarray]:
        return [self.stack[s:s + di + 1] for s, di in zip(self.row_start, self.degrees)]

    def coefficient(self, i: int, j: int) -> np.ndarray:
        """``R_{i,j}``; zero vector when ``j > d_i``."""
        if j > self.degrees[i] or j < 0:
            return np.zeros(self.width, dtype=self.stack.dtype)
        return self.stack[self.row_start[i] + j]

    def coefficient_cube(self) -> np.ndarray:
        """Padded ``(d+1) x m x width`` array of the matrix coefficients ``M_j``."""
        cube = np.zeros((self.profile.d + 1, self.m, self.width), dtype=self.stack.dtype)
        for i, row in enumerate(self.rows):
            cube[:row.shape[0], i] = row
        return cube

    # -- degrees and coefficient matrices ------------------------------------
    @cached_property
    def zero_tol(self) -> float:
        top = float(np.max(np.abs(self.stack))) if self.stack.size else 0.0
        return ZERO_TOL * (top if top > 0 else 1.0)

    @cached_property
    def row_degrees(self) -> tuple[int, ...]:
        """Exact row degrees; ``-1`` for a zero row.

        A coefficient vector counts as zero when its max-norm is at most
        ``1e-12`` times the largest entry of the whole matrix.
        """
        out = []
        for row in self.rows:
            norms = np.max(np.abs(row), axis=1)
            nz = np.nonzero(norms > self.zero_tol)[0]
            out.append(int(nz[-1]) if nz.size else -1)
        return tuple(out)

    @property
    def degree(self) -> int:
        return max(self.row_degrees)

    def views(self) -> CoefficientViews:
        z = np.zeros(self.width, dtype=self.stack.dtype)
        lead_rw = np.array([row[-1] for row in self.rows])
        hr = np.array([row[dd] if dd >= 0 else z for row, dd in zip(self.rows, self.row_degrees)])
        d = self.profile.d
        lead = np.array([row[-1] if di == d else z for row, di in zip(self.rows, self.degrees)])
        return CoefficientViews(_readonly(lead_rw), _readonly(hr), _readonly(lead))

    @property
    def leading_rowwise(self) -> np.ndarray:
        """``M_dbar``: row ``i`` is the coefficient of ``lambda**d_i``."""
        return self.views().leading_rowwise

    @property
    def highest_row_degree(self) -> np.ndarray:
        """``M_hr``: row ``i`` is the coefficient of ``lambda**deg(R_i)``."""
        return self.views().highest_row_degree

    @property
    def leading(self) -> np.ndarray:
        """``M_d``: coefficient of ``lambda**d`` with ``d = max d_i``."""
        return self.views().leading

    # -- arithmetic ----------------------------------------------------------
    def _same_space(self, other: "PolyMatrix"):
        if self.profile != other.profile:
            raise ProfileMismatch(f"profiles differ: {self.profile} vs {other.profile}")

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_space(other)
        return PolyMatrix(self.profile, self.stack + other.stack)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._same_space(other)
        return PolyMatrix(self.profile, self.stack - other.stack)

    def scaled(self, c) -> "PolyMatrix":
        return PolyMatrix(self.profile, self.stack * c)

    def equals(self, other: "PolyMatrix") -> bool:
        """Exact equality of profile and every coefficient."""
        return self.profile == other.profile and np.array_equal(self.stack, other.stack)

    def __repr__(self):
        return f"PolyMatrix(profile={self.profile.label()}, field={self.field})"

    # -- serialization -------------------------------------------------------
    def to_dict(self) -> dict:
        def enc(x):
            if self.is_complex:
                return [float(x.real), float(x.imag)]
            return float(x)

        return {
            "field": self.field,
            "m": self.m,
            "n": self.n,
            "degrees": list(self.degrees),
            "rows": [[[enc(x) for x in vec] for vec in row] for row in self.rows],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def make_poly_matrix(profile: DegreeProfile, coefficients, field: str | None = None) -> PolyMatrix:
    """Validate nested coefficient lists against ``profile``.

    ``coefficients[i][j]`` is the length-``(m+n)`` vector ``R_{i,j}``.  Complex
    entries may be given as Python complex numbers or ``[re, im]`` pairs.

    Raises
    ------
    InvalidProfile
        If ``max(d_i) < 1``.
    ShapeMismatch
        If row ``i`` does not hold ``d_i + 1`` vectors of length ``m + n``.
    """
    profile.check_standing()
    if len(coefficients) != profile.m:
        raise ShapeMismatch(f"expected {profile.m} rows, got {len(coefficients)}")
    flat = []
    for i, (row, di) in enumerate(zip(coefficients, profile.degrees)):
        if len(row) != di + 1:
            raise ShapeMismatch(f"row {i} has {len(row)} coefficient vectors, expected {di + 1}")
        for j, vec in enumerate(row):
            if len(vec) != profile.width:
                raise ShapeMismatch(
                    f"R[{i},{j}] has length {len(vec)}, expected {profile.width}")
            flat.append(vec)
    if field is None:
        field = "complex" if any(isinstance(x, (complex, list, tuple)) or np.iscomplexobj(x)
                                 for vec in flat for x in vec) else "real"
    if field == "complex":
        data = np.array([[complex(*x) if isinstance(x, (list, tuple)) else complex(x) for x in vec]
                         for vec in flat], dtype=np.complex128).reshape(-1, profile.width)
    elif field == "real":
        data = np.array(flat, dtype=np.float64).reshape(-1, profile.width)
    else:
        raise InvalidProfile(f"unknown field {field!r}")
    return PolyMatrix(profile, data)


def from_dict(doc: dict) -> PolyMatrix:
    try:
        profile = DegreeProfile.from_mn(int(doc["m"]), int(doc["n"]), list(doc["degrees"]))
        return make_poly_matrix(profile, doc["rows"], field=doc.get("field", "real"))
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"malformed polynomial matrix document: {exc}") from exc


def load(path) -> PolyMatrix:
    with open(path, encoding="utf-8") as fh:
        return from_dict(json.load(fh))


def from_polys(profile: DegreeProfile, entries) -> PolyMatrix:
    """Build from ``entries[i][c]`` = ascending coefficient list of entry ``(i, c)``."""
    coeffs = []
    for i, di in enumerate(profile.degrees):
        row = np.zeros((di + 1, profile.width), dtype=complex)
        for c, poly in enumerate(entries[i]):
            poly = [poly] if np.isscalar(poly) else poly
            if len(poly) > di + 1 and any(poly[di + 1:]):
                raise ShapeMismatch(f"entry ({i},{c}) exceeds degree bound {di}")
            for j, a in enumerate(poly[:di + 1]):
                row[j, c] = a
        coeffs.append(row)
    stack = np.concatenate(coeffs)
    if not np.any(stack.imag):
        stack = stack.real
    profile.check_standing()
    return PolyMatrix(profile, stack)


def evaluate(M: PolyMatrix, lam) -> np.ndarray:
    """``M(lam)`` by Horner's rule on every row."""
    return _kernels.horner(M.stack, M.row_start, M.degrees, lam)


def reversal(M: PolyMatrix, w: int) -> PolyMatrix:
    """``rev_w M(lambda) = lambda**w M(1/lambda)`` in the constant profile ``(w, ..., w)``.

    Raises :class:`DegreeTooSmall` if ``w`` is below the exact degree of ``M``.
    """
    if w < M.degree:
        raise DegreeTooSmall(f"reversal degree {w} is below deg(M) = {M.degree}")
    profile = DegreeProfile((w,) * M.m, M.width)
    out = np.zeros((M.m * (w + 1), M.width), dtype=M.stack.dtype)
    for i, row in enumerate(M.rows):
        keep = min(row.shape[0], w + 1)
        base = i * (w + 1)
        # coefficient j of the reversal is coefficient w - j of the original
        out[base + w - np.arange(keep)] = row[:keep]
    return PolyMatrix(profile, out)


def distance_frobenius(M: PolyMatrix, Mt: PolyMatrix) -> float:
    """``rho(M, Mt)``: Euclidean distance between all coefficient vectors."""
    M._same_space(Mt)
    diff = (M.stack - Mt.stack).ravel()
    return math.sqrt(math.fsum((diff.real ** 2 + diff.imag ** 2) if M.is_complex or Mt.is_complex
                               else diff * diff))


def distance_spectral(M: PolyMatrix, Mt: PolyMatrix) -> float:
    """``rho_2(M, Mt) = ||T_1(M) - T_1(Mt)||_2``."""
    M._same_space(Mt)
    return spectral_norm(M - Mt)


def spectral_norm(M: PolyMatrix) -> float:
    """``||T_1(M)||_2``, the largest singular value of the first trimmed Sylvester matrix."""
    from .sylvester import trimmed

    T1 = trimmed(M, 1)
    if not np.any(T1):
        return 0.0
    return float(np.linalg.svd(T1, compute_uv=False)[0])


def random_matrix(profile: DegreeProfile, seed=None, scale: float = 1.0,
                  field: str = "real") -> PolyMatrix:
    """Gaussian coefficients times ``scale``; independent real/imaginary parts for ``field='complex'``."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    shape = (profile.n_coefficients, profile.width)
    data = rng.standard_normal(shape)
    if field == "complex":
        data = data + 1j * rng.standard_normal(shape)
    elif field != "real":
        raise InvalidProfile(f"unknown field {field!r}")
    return PolyMatrix(profile, scale * data)
