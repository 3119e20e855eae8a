import numpy as np
import pytest
from hypothesis import settings, strategies as st

from socv import linalg_core as la
from socv.functions import POSITIVE
from socv.harness import gen_hermitian_in_interval

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=6)
alphas = st.floats(min_value=0.02, max_value=0.98)


def positive(seed, dim, complex_entries=False, cap=100.0):
    rng = np.random.default_rng(seed)
    return gen_hermitian_in_interval(POSITIVE, dim, rng, cap=cap, complex_entries=complex_entries)


def positive_pair(seed, dim, complex_entries=False):
    rng = np.random.default_rng(seed)
    return (gen_hermitian_in_interval(POSITIVE, dim, rng, complex_entries=complex_entries),
            gen_hermitian_in_interval(POSITIVE, dim, rng, complex_entries=complex_entries))


def scale_of(*Ms):
    return max(1.0, *(la.op_norm(M) for M in Ms))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def paper_pair():
    return np.array([[1.0, 0.0], [0.0, 0.0]]), np.array([[1.0, 1.0], [1.0, 1.0]])
