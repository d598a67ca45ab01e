import numpy as np
import pytest
from hypothesis import given, strategies as st

from minbasis import (DegreeProfile, compute_dual, distance_spectral, evaluate, from_polys,
                      generic_eigenstructure, is_ftsr, minimal_indices, perturb_dual,
                      random_matrix, verify_duality)
from minbasis.dualbasis import (dual_radius, product_coefficients, same_null_module,
                                shift_stack, theta_bounds)
from minbasis.errors import (MinimalityRequired, NotFTSR, OutsideNeighborhood,
                             ShapeMismatch)
from minbasis.experiments import scaled_direction
from minbasis.polymat import PolyMatrix
from minbasis.sylvester import trimmed

from helpers import profiles


def sampled_product(M, N, seed=0, count=5):
    """max |M(z) N(z)^T| at random complex points, relative to the sizes of M and N."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for z in rng.standard_normal(count) + 1j * rng.standard_normal(count):
        P = evaluate(M, z) @ evaluate(N, z).T
        worst = max(worst, np.abs(P).max() / (np.abs(evaluate(M, z)).max()
                                             * np.abs(evaluate(N, z)).max()))
    return worst


# -- the 4 x 7 example pair -------------------------------------------------------

def test_example_pair_is_dual(example_m, example_n):
    chk = verify_duality(example_m, example_n)
    assert chk.holds
    assert chk.residual == 0.0
    assert chk.degree_sum_m == chk.degree_sum_n == 4
    assert not np.any(product_coefficients(example_m, example_n))


def test_example_compute_dual(example_m, example_n):
    dual = compute_dual(example_m)
    assert dual.N.degrees == (0, 2, 2)
    assert dual.source_indices == (0, 2, 2)
    assert verify_duality(example_m, dual)
    assert same_null_module(dual, example_n)
    assert sampled_product(example_m, dual.N) < 1e-12


def test_example_dual_to_dict(example_m):
    doc = compute_dual(example_m).to_dict()
    assert doc["source_indices"] == [0, 2, 2]
    assert doc["degrees"] == [0, 2, 2]


def test_same_null_module_rejects_other_span(example_m, example_n):
    stack = example_n.stack.copy()
    stack[0] = np.eye(7)[0]              # e_1 in place of e_2
    other = PolyMatrix(example_n.profile, stack)
    assert not same_null_module(example_n, other)


# -- [1, lambda] ----------------------------------------------------------------------

def test_one_lambda_dual(one_lambda):
    N = compute_dual(one_lambda).N
    assert N.degrees == (1,)
    c = N.stack.reshape(-1)            # [v_0; v_1] with v = [-lambda, 1] up to scale
    ref = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2)
    assert abs(abs(c @ ref) - 1) < 1e-14
    assert verify_duality(one_lambda, N)


def test_one_lambda_wrong_partner(one_lambda):
    N = PolyMatrix(DegreeProfile((0,), 2), np.array([[1.0, 1.0]]))
    chk = verify_duality(one_lambda, N)
    assert not chk
    assert chk.residual == pytest.approx(0.5)     # max_j ||P_j|| = 1 over sqrt(2) * sqrt(2)
    assert chk.degree_sum_m == 1 and chk.degree_sum_n == 0


def test_one_lambda_dual_radius(one_lambda):
    th = theta_bounds(one_lambda)
    assert th.case == "c"
    assert th.theta1 == pytest.approx(1 / np.sqrt(2))
    assert th.theta2 == pytest.approx(1 / np.sqrt(2))
    # sigma_min(N_hr) / ||N||_F = 1 / sqrt(2) for N = [-lambda, 1]
    assert dual_radius(one_lambda) == pytest.approx(0.25)


def test_verify_shape_mismatch(one_lambda, example_n):
    with pytest.raises(ShapeMismatch):
        verify_duality(one_lambda, example_n)


def test_non_minimal_input(lambda_lambda):
    with pytest.raises(MinimalityRequired):
        compute_dual(lambda_lambda)
    N = compute_dual(lambda_lambda, require_minimal=False).N
    assert N.degrees == (0,)
    assert np.allclose(abs(N.stack @ [1, 1]), 0, atol=1e-15)
    assert not verify_duality(lambda_lambda, N)     # M is not minimal


def test_shift_stack():
    v = np.arange(1.0, 5.0)             # two blocks of width 2
    np.testing.assert_array_equal(shift_stack(v, 2, 1, 4), [0, 0, 1, 2, 3, 4, 0, 0])


# -- theta cases -------------------------------------------------------------------

@pytest.mark.parametrize("label, case", [
    ("4,3:0,1,1,2", "a"),
    ("1,2:1", "b"),
    ("2,2:1,3", "c"),
    ("1,1:1", "c"),
])
def test_theta_case(label, case):
    M = random_matrix(DegreeProfile.parse(label), 5)
    th = theta_bounds(M)
    assert th.case == case
    assert 0 < th.theta1 <= th.theta2 or case == "b"
    assert th.theta1 == min(th.terms.values()) or case == "c"


def test_theta_needs_ftsr(example_m):
    with pytest.raises(NotFTSR):
        theta_bounds(example_m)


# -- random matrices ---------------------------------------------------------------

@given(profiles(), st.integers(0, 2**32 - 1), st.sampled_from(["real", "complex"]))
def test_dual_of_random_matrix(p, seed, field):
    M = random_matrix(p, seed, field=field)
    dual = compute_dual(M)
    rep = minimal_indices(M)
    assert tuple(sorted(dual.N.degrees)) == rep.minimal_indices
    assert verify_duality(M, dual)
    assert sampled_product(M, dual.N, seed) < 1e-10
    if is_ftsr(M):
        assert tuple(sorted(dual.N.degrees)) == generic_eigenstructure(p).indices


@given(profiles(), st.integers(0, 2**32 - 1))
def test_shifts_of_found_vectors_stay_in_kernel(p, seed):
    M = random_matrix(p, seed)
    N = compute_dual(M).N
    w = M.width
    for row, deg in zip(N.rows, N.degrees):
        v = row.reshape(-1)
        for s in range(3):
            T = trimmed(M, deg + 1 + s)
            np.testing.assert_allclose(T @ shift_stack(v, w, s, deg + 1 + s), 0, atol=1e-12)


@given(profiles(), st.integers(0, 2**32 - 1))
def test_perturb_dual_identity(p, seed):
    M = random_matrix(p, seed)
    N = compute_dual(M)
    res = perturb_dual(M, N, M)
    assert res.rho2 == 0.0 and res.relative_change == 0.0
    assert res.residual <= 1e-10


@given(profiles(), st.integers(0, 2**32 - 1), st.sampled_from([0.1, 0.5, 0.9]))
def test_perturb_dual_within_radius(p, seed, frac):
    M = random_matrix(p, seed)
    N = compute_dual(M)
    r = dual_radius(M, N)
    rng = np.random.default_rng(seed)
    Mt = M + scaled_direction(p, rng, frac * r)
    assert distance_spectral(M, Mt) == pytest.approx(frac * r)
    res = perturb_dual(M, N, Mt)
    assert res.relative_change <= res.bound * (1 + 1e-14)
    assert res.dual.N.degrees == tuple(sorted(N.N.degrees))
    assert verify_duality(Mt, res.dual)


def test_perturb_dual_t0_keeps_degrees():
    p = DegreeProfile.parse("2,2:1,1")          # k' = 1, t = 0
    M = random_matrix(p, 11)
    N = compute_dual(M)
    assert N.N.degrees == (1, 1)
    Mt = M + scaled_direction(p, np.random.default_rng(3), 0.5 * dual_radius(M, N))
    res = perturb_dual(M, N, Mt)
    assert res.dual.N.degrees == (1, 1)
    assert res.theta.case == "c"


def test_perturb_dual_outside(one_lambda):
    N = compute_dual(one_lambda)
    Mt = one_lambda + scaled_direction(one_lambda.profile, np.random.default_rng(0), 0.3)
    with pytest.raises(OutsideNeighborhood):
        perturb_dual(one_lambda, N, Mt)
