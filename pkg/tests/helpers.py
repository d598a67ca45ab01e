"""Shared hypothesis strategies and generators for the test-suite."""
import numpy as np
from hypothesis import strategies as st

from minbasis import DegreeProfile
from minbasis.polymat import PolyMatrix


@st.composite
def profiles(draw, max_m=4, max_n=4, max_d=3):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    degs = draw(st.lists(st.integers(0, max_d), min_size=m, max_size=m))
    if max(degs) == 0:
        degs[draw(st.integers(0, m - 1))] = draw(st.integers(1, max_d))
    return DegreeProfile.from_mn(m, n, degs)


def integer_matrix(profile, seed, low=-2, high=2, sparsity=0.4):
    """Small-integer coefficients with roughly ``sparsity`` of them zeroed."""
    rng = np.random.default_rng(seed)
    data = rng.integers(low, high + 1, size=(profile.n_coefficients, profile.width))
    data[rng.random(data.shape) < sparsity] = 0
    return PolyMatrix(profile, data.astype(float))
