import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sosa.exceptions import ConfigurationError
from sosa.testfunctions import (
    SUITE,
    Schoen,
    ackley,
    keane,
    levy,
    make_test_function,
    michalewicz,
    parse_problem,
    rastrigin,
)


def test_ackley_origin_value():
    obj = make_test_function("ackley")
    assert obj.dimension == 30
    assert obj(np.zeros(30)) == pytest.approx(-20.0 - np.e, abs=1e-12)
    assert obj(np.zeros(30)) == pytest.approx(-22.71828, abs=1e-5)
    np.testing.assert_array_equal(obj.domain.lower, -15.0)
    np.testing.assert_array_equal(obj.domain.upper, 20.0)


def test_rastrigin_minimum_at_shift():
    obj = make_test_function("rastrigin")
    assert obj(np.full(30, 4.5)) == pytest.approx(-30.0, abs=1e-12)
    assert obj.known_minimum == -30.0


def test_levy_minimum_at_ones():
    assert levy(np.ones(30)) == pytest.approx(0.0, abs=1e-12)


def test_michalewicz_two_dim_reference():
    # widely tabulated 2-d minimum of the m = 10 form
    assert michalewicz(np.array([2.20290552, 1.57079633])) == pytest.approx(-1.8013034, abs=1e-6)


def test_keane_negative_on_domain(rng):
    x = rng.uniform(1, 10, size=(100, 30))
    assert np.all(keane(x) < 0)


def test_schoen_nodes_and_minimum():
    f = Schoen(5, seed=3)
    for z, v in zip(f.nodes, f.values):
        assert f(z) == v
    assert f.minimum == -100.0
    x = np.random.default_rng(0).random((200, 5))
    assert np.all(f(x) >= f.minimum)


@pytest.mark.parametrize("name", sorted(SUITE))
def test_batch_matches_single_and_is_deterministic(name, rng):
    obj = make_test_function(name, d=6)
    X = obj.domain.lower + rng.random((10, 6)) * obj.domain.width
    batch = obj.func(X)
    single = np.array([obj.func(x) for x in X])
    np.testing.assert_allclose(batch, single, rtol=1e-13, atol=1e-13)
    assert obj(X[0]) == obj(X[0])


@given(st.integers(2, 40), st.integers(0, 2**31))
def test_reference_minimum_is_a_lower_value(d, seed):
    x_rng = np.random.default_rng(seed)
    for func, low, high, lowest in [(ackley, -15, 20, -20 - np.e), (rastrigin, 4, 5, -d), (levy, -5, 5, 0.0)]:
        x = x_rng.uniform(low, high, size=(5, d))
        assert np.all(func(x) >= lowest - 1e-9)


def test_parse_problem():
    assert parse_problem("schoen").dimension == 35
    assert parse_problem("Levy10").name == "levy10"
    assert parse_problem("michalewicz30").min_bound == -23.0
    assert parse_problem("michalewicz10").min_bound is None
    for bad in ["sphere30", "ackley1", "30", ""]:
        with pytest.raises(ConfigurationError):
            parse_problem(bad)
