import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sosa.domain import Hypercube, Objective, denormalize, normalize
from sosa.exceptions import ConfigurationError, DomainError, NumericError


def test_corners_map_to_unit_corners():
    box = Hypercube([-1.0, 2.0, 0.0], [3.0, 5.0, 1.0])
    assert np.array_equal(normalize(box.lower, box), np.zeros(3))
    assert np.array_equal(normalize(box.upper, box), np.ones(3))


def test_midpoint():
    box = Hypercube.uniform(-15, 20, 1)
    assert normalize([2.5], box)[0] == pytest.approx(0.5, abs=1e-15)


def test_outside_point_rejected():
    box = Hypercube.uniform(0, 1, 2)
    with pytest.raises(DomainError):
        normalize([0.5, 1.5], box)
    with pytest.raises(DomainError):
        normalize([0.5], box)
    with pytest.raises(NumericError):
        normalize([0.5, np.nan], box)


def test_invalid_box():
    with pytest.raises(ConfigurationError):
        Hypercube([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(ConfigurationError):
        Hypercube([0.0], [np.inf])
    with pytest.raises(ConfigurationError):
        Hypercube([0.0, 0.0], [1.0])


def test_bounds_are_read_only():
    box = Hypercube.uniform(0, 1, 2)
    with pytest.raises(ValueError):
        box.lower[0] = 5.0


@given(
    st.integers(1, 8).flatmap(
        lambda d: st.tuples(
            arrays(float, d, elements=st.floats(-1e3, 1e3)),
            arrays(float, d, elements=st.floats(1e-2, 1e3)),
            arrays(float, d, elements=st.floats(0, 1)),
        )
    )
)
def test_round_trip(args):
    lower, width, u = args
    box = Hypercube(lower, lower + width)
    x = denormalize(u, box)
    assert box.contains(x)
    np.testing.assert_allclose(normalize(x, box), u, atol=1e-9)


def test_objective_counts_and_checks():
    obj = Objective(lambda x: float(np.sum(x**2)), Hypercube.uniform(-1, 1, 2), name="sphere")
    assert obj([0.5, 0.5]) == 0.5
    assert obj.evaluate_unit([0.5, 0.5]) == 0.0
    assert obj.calls == 2
    with pytest.raises(DomainError):
        obj([2.0, 0.0])
    with pytest.raises(DomainError):
        obj([0.0, 0.0, 0.0])
    assert obj.calls == 2
    obj.reset_counter()
    assert obj.calls == 0
