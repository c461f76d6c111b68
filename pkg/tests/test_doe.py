import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sosa.doe import has_full_tail_rank, initial_design_size, latin_hypercube
from sosa.exceptions import ConfigurationError


def test_one_dimensional_two_points(rng):
    X = latin_hypercube(1, 2, rng)
    assert sorted(np.floor(X[:, 0] * 2).astype(int)) == [0, 1]


def test_thirty_dim_strata(rng):
    m = initial_design_size(30)
    assert m == 62
    X = latin_hypercube(30, m, rng)
    assert X.shape == (62, 30)
    strata = np.sort(np.floor(X * m).astype(int), axis=0)
    assert np.array_equal(strata, np.tile(np.arange(m)[:, None], (1, 30)))


def test_rank_against_svd_oracle():
    X = latin_hypercube(5, 12, np.random.default_rng(7))
    aug = np.hstack([np.ones((12, 1)), X])
    sv = np.linalg.svd(aug, compute_uv=False)
    assert np.sum(sv > sv[0] * 1e-12) == 6


def test_too_few_points():
    with pytest.raises(ConfigurationError):
        latin_hypercube(5, 5, np.random.default_rng(0))


def test_seeded_design_is_reproducible():
    a = latin_hypercube(4, 10, np.random.default_rng(3))
    b = latin_hypercube(4, 10, np.random.default_rng(3))
    assert np.array_equal(a, b)


@given(st.integers(1, 12), st.integers(0, 20), st.integers(0, 2**31))
def test_design_properties(d, extra, seed):
    m = d + 1 + extra
    X = latin_hypercube(d, m, np.random.default_rng(seed), n_draws=3)
    assert np.all((X >= 0) & (X < 1))
    strata = np.sort(np.floor(X * m).astype(int), axis=0)
    assert np.array_equal(strata[:, 0], np.arange(m))
    assert np.all(strata == strata[:, :1])
    assert has_full_tail_rank(X)
