import numpy as np
import pytest
from hypothesis import given, strategies as st

from minbasis import (DegreeProfile, build_sylvester, build_trimmed, from_polys,
                      nesting_permutation, random_matrix)
from minbasis.errors import InputError
from minbasis.rank import exact_rank, svd_rank
from minbasis.sylvester import row_table, to_csv, trimmed, trimmed_shape, untrim

from conftest import EXAMPLE_T2
from helpers import integer_matrix, profiles


def test_example_t2_matches_printed(example_m):
    T = build_trimmed(example_m, 2)
    assert T.shape == (12, 14)
    np.testing.assert_array_equal(T.data, EXAMPLE_T2)


def test_example_t1_shape_and_rank(example_m):
    T1 = trimmed(example_m, 1)
    assert T1.shape == (8, 7)
    assert svd_rank(T1).rank == 6
    assert exact_rank(T1) == 6


def test_one_lambda_matrices(one_lambda):
    np.testing.assert_array_equal(build_sylvester(one_lambda, 1).data, np.eye(2))
    np.testing.assert_array_equal(trimmed(one_lambda, 1), np.eye(2))
    np.testing.assert_array_equal(build_sylvester(one_lambda, 2).data,
                                  [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]])
    np.testing.assert_array_equal(trimmed(one_lambda, 2), build_sylvester(one_lambda, 2).data)


def test_example_structural_zero_rows(example_m):
    S = build_sylvester(example_m, 2).data
    T = trimmed(example_m, 2)
    assert S.shape[0] - T.shape[0] == 4     # m d - sum(d_i) = 8 - 4
    zero_rows = [r for r in range(S.shape[0]) if not np.any(S[r])]
    assert len(zero_rows) >= 4


def test_row_map(example_m):
    T = build_trimmed(example_m, 2)
    assert len(T.row_map) == 12
    # first block row holds (i, 0) for every i, then rows with p < k + d_i
    assert T.row_map[:4] == ((0, 0), (1, 0), (2, 0), (3, 0))
    assert T.row_map[-1] == (3, 3)


def test_row_table_read_only():
    tab = row_table((0, 1, 2), 2)
    with pytest.raises(ValueError):
        tab[0, 0] = 3


@pytest.mark.parametrize("k", [0, -1, 1.5])
def test_bad_k(example_m, k):
    with pytest.raises(InputError):
        build_trimmed(example_m, k)


def test_trimmed_is_memoized(example_m):
    assert build_trimmed(example_m, 3) is build_trimmed(example_m, 3)


@given(profiles(), st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_untrim_reproduces_sylvester(p, seed, k):
    M = random_matrix(p, seed, field="complex" if seed % 2 else "real")
    T = build_trimmed(M, k)
    assert T.shape == trimmed_shape(p, k)
    np.testing.assert_array_equal(untrim(T, p), build_sylvester(M, k).data)


@given(profiles(), st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_sylvester_block_toeplitz(p, seed, k):
    M = random_matrix(p, seed)
    S = build_sylvester(M, k).data
    cube = M.coefficient_cube()
    m, w = p.m, p.width
    for pp in range(k + p.d):
        for q in range(k):
            blk = S[pp * m:(pp + 1) * m, q * w:(q + 1) * w]
            j = pp - q
            np.testing.assert_array_equal(blk, cube[j] if 0 <= j <= p.d else 0)


@given(profiles(), st.integers(0, 2**32 - 1), st.integers(0, 4))
def test_nesting_identity(p, seed, k):
    M = integer_matrix(p, seed)
    perm = nesting_permutation(p, k)
    assert sorted(perm) == list(range(len(perm)))
    P = trimmed(M, k + 1)[perm]
    rows_k, cols_k = k * p.m + p.total, k * p.width
    if k:
        np.testing.assert_array_equal(P[:rows_k, :cols_k], trimmed(M, k))
    np.testing.assert_array_equal(P[rows_k:, :cols_k], 0)
    np.testing.assert_array_equal(P[rows_k:, cols_k:], M.leading_rowwise)


@given(profiles(), st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_sylvester_and_trimmed_rank_agree(p, seed, k):
    M = integer_matrix(p, seed)
    S, T = build_sylvester(M, k).data, trimmed(M, k)
    assert exact_rank(S) == exact_rank(T)
    s_s = np.linalg.svd(S, compute_uv=False)
    s_t = np.linalg.svd(T, compute_uv=False)
    assert s_s[0] == pytest.approx(s_t[0], rel=1e-13)


# Example with m=3, d=(0,1,2): the permuted T_3 splits as [[T_2, X], [0, M_dbar]]
def _small_symbolic():
    p = DegreeProfile.from_mn(3, 2, (0, 1, 2))
    vals = iter(range(1, 100))
    entries = [[[next(vals) for _ in range(di + 1)] for _ in range(5)] for di in p.degrees]
    return from_polys(p, entries)


def test_nesting_three_rows():
    M = _small_symbolic()
    p = M.profile
    perm = nesting_permutation(p, 2)
    T3 = trimmed(M, 3)
    P = T3[perm]
    assert T3.shape == (12, 15)
    np.testing.assert_array_equal(P[:9, :10], trimmed(M, 2))
    np.testing.assert_array_equal(P[9:, :10], 0)
    np.testing.assert_array_equal(P[9:, 10:], M.leading_rowwise)
    # rows (p=2, i=0), (p=3, i=1), (p=4, i=2) of T_3 move to the bottom
    assert list(perm[-3:]) == [6, 9, 11]


def test_nesting_example_bottom_rows(example_m):
    perm = nesting_permutation(example_m.profile, 1)
    P = trimmed(example_m, 2)[perm]
    bold = P[-4:, 7:]
    np.testing.assert_array_equal(bold, example_m.leading_rowwise)
    np.testing.assert_array_equal(P[:8, :7], trimmed(example_m, 1))


def test_nesting_homogeneous_profile():
    p = DegreeProfile.from_mn(2, 1, (2, 2))
    perm = nesting_permutation(p, 1)
    # T_2 has block rows p = 0..3; the last block row (p = 3) moves down unchanged
    assert list(perm[-2:]) == [6, 7]
    assert list(perm[:-2]) == list(range(6))


def test_to_csv(one_lambda):
    text = to_csv(trimmed(one_lambda, 1))
    assert text == "1.0,0.0\n0.0,1.0\n"
