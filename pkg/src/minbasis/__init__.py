"""Minimal bases of polynomial matrices through trimmed Sylvester matrices.

The package computes right minimal indices from ranks of trimmed Sylvester
matrices, certifies minimal bases, tests full trimmed Sylvester rank, extracts
dual minimal bases and evaluates perturbation radii.
"""
from ._kernels import BACKEND
from .dualbasis import DualBasis, compute_dual, perturb_dual, verify_duality
from .eigenstructure import (EigenstructureReport, certify_minimal_basis,
                             certify_minimal_basis_full_rank, classical_check,
                             generic_eigenstructure, infinite_elementary_divisors, is_ftsr,
                             minimal_indices, rank_sequence)
from .errors import HypothesisError, InputError, MinBasisError, NumericalError
from .polymat import (DegreeProfile, PolyMatrix, distance_frobenius, distance_spectral, evaluate,
                      from_polys, load, make_poly_matrix, random_matrix, reversal)
from .rank import exact_rank, min_norm_solve, svd_rank
from .robustness import (RobustnessReport, classical_bound_check, ftsr_radius,
                         minimal_basis_radius, norm_sandwich_check, robustness_report,
                         sharp_radius_and_boundary, theta_bounds)
from .sylvester import build_sylvester, build_trimmed, nesting_permutation, trimmed

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "DegreeProfile", "DualBasis", "EigenstructureReport", "HypothesisError",
    "InputError", "MinBasisError", "NumericalError", "PolyMatrix", "RobustnessReport",
    "build_sylvester", "build_trimmed", "certify_minimal_basis", "certify_minimal_basis_full_rank",
    "classical_bound_check", "classical_check", "compute_dual", "distance_frobenius",
    "distance_spectral", "evaluate", "exact_rank", "from_polys", "ftsr_radius",
    "generic_eigenstructure", "infinite_elementary_divisors", "is_ftsr", "load",
    "make_poly_matrix", "min_norm_solve", "minimal_basis_radius", "minimal_indices",
    "nesting_permutation", "norm_sandwich_check", "perturb_dual", "random_matrix",
    "rank_sequence", "reversal", "robustness_report", "sharp_radius_and_boundary", "svd_rank",
    "theta_bounds", "trimmed", "verify_duality",
]
