import pickle

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats
from sklearn.base import clone

from sosa.domain import Hypercube, Objective
from sosa.exceptions import ConfigurationError, NumericError
from sosa.optimizer import (
    MeritWeights,
    OptimizerConfig,
    OptimizerState,
    SurrogateOptimizer,
    distance_score,
    next_weights,
    run,
    select_next,
    surrogate_score,
)
from sosa.testfunctions import make_test_function


def quadratic(d=2):
    center = np.linspace(0.3, -0.2, d)
    return Objective(lambda x: float(np.sum((x - center) ** 2)), Hypercube.uniform(-1, 1, d), name="quad")


def test_surrogate_score_examples():
    np.testing.assert_allclose(surrogate_score([1, 2, 3]), [0, 0.5, 1])
    np.testing.assert_array_equal(surrogate_score([5, 5, 5]), [1, 1, 1])
    np.testing.assert_array_equal(surrogate_score([7.0]), [1])
    with pytest.raises(NumericError):
        surrogate_score([1.0, np.inf])


def test_distance_score_examples():
    evaluated = np.zeros((1, 1))
    scores, raw = distance_score(np.array([[0.1], [0.3]]), evaluated)
    np.testing.assert_allclose(scores, [1, 0])
    np.testing.assert_allclose(raw, [0.1, 0.3])
    scores, _ = distance_score(np.array([[0.2], [-0.2]]), evaluated)
    np.testing.assert_array_equal(scores, [1, 1])
    pts = np.random.default_rng(0).random((4, 3))
    assert np.all(distance_score(pts, pts)[1] == 0)


def brute_force_merit(cands, s, evaluated, w_s):
    """Direct transcription of the weighted score, one candidate at a time."""
    s = list(s)
    dist = [min(np.sqrt(sum((c - e) ** 2)) for e in evaluated) for c in cands]
    vs = [1.0 if max(s) == min(s) else (v - min(s)) / (max(s) - min(s)) for v in s]
    vd = [1.0 if max(dist) == min(dist) else (max(dist) - v) / (max(dist) - min(dist)) for v in dist]
    merit = [w_s * a + (1 - w_s) * b for a, b in zip(vs, vd)]
    return merit.index(min(merit)), merit


@pytest.mark.parametrize("seed", range(20))
def test_select_next_matches_brute_force(seed):
    r = np.random.default_rng(seed)
    cands, evaluated = r.random((30, 3)), r.random((8, 3))
    s = r.normal(size=30)
    w = MeritWeights.from_distance_weight(r.random())
    idx, merit = select_next(cands, s, evaluated, w)
    ref_idx, ref_merit = brute_force_merit(cands, s, evaluated, w.w_s)
    assert idx == ref_idx
    np.testing.assert_allclose(merit, ref_merit, atol=1e-12)


def test_limits_of_weights(rng):
    cands, evaluated = rng.random((40, 2)), rng.random((5, 2))
    s = rng.normal(size=40)
    assert select_next(cands, s, evaluated, MeritWeights(1.0, 0.0))[0] == np.argmin(s)
    _, raw = distance_score(cands, evaluated)
    assert select_next(cands, s, evaluated, MeritWeights(0.0, 1.0))[0] == np.argmax(raw)


def test_ties_pick_first_index():
    cands = np.array([[0.5], [0.5], [0.5]])
    assert select_next(cands, [1.0, 1.0, 1.0], np.zeros((1, 1)), MeritWeights(0.5, 0.5))[0] == 0


@given(st.integers(2, 40), st.integers(0, 2**31), st.floats(0, 1), st.floats(1e-3, 1e3), st.floats(-1e3, 1e3))
def test_dual_optimal_and_affine_invariance(t, seed, w_d, scale, shift):
    r = np.random.default_rng(seed)
    evaluated = r.random((5, 2))
    cands = r.random((t, 2))
    s = r.normal(size=t)
    _, raw = distance_score(cands, evaluated)
    star = int(np.argmax(raw))
    s[star] = s.min() - 1.0
    w = MeritWeights.from_distance_weight(w_d)
    idx, merit = select_next(cands, s, evaluated, w)
    assert merit[star] == 0.0 and merit[idx] == 0.0
    assert np.all((merit >= 0) & (merit <= 1))
    s2 = r.normal(size=t)
    assert select_next(cands, s2, evaluated, w)[0] == select_next(cands, scale * s2 + shift, evaluated, w)[0]


def test_next_weights_rules(rng):
    state = OptimizerState.empty(4, 1)
    state.current_weights = MeritWeights(0.3, 0.7)
    state.last_improved = True
    assert next_weights(state, 1e-3, rng) is state.current_weights
    state.last_improved = False
    w = next_weights(state, 1e-3, rng)
    assert w.w_s + w.w_d == 1.0
    draws = [next_weights(state, 1e-3, rng).w_d for _ in range(100_000)]
    assert stats.kstest(draws, "uniform").pvalue > 0.01


def test_state_improvement_threshold():
    state = OptimizerState.empty(5, 1)
    state.add([0.0], 10.0, 1e-3)
    assert state.add([0.1], 9.0, 1e-3) and state.last_improved
    assert state.add([0.2], 8.9999, 1e-3) and not state.last_improved
    assert not state.add([0.3], 9.5, 1e-3) and state.best_f == 8.9999


def test_merit_weights_validation():
    with pytest.raises(ConfigurationError):
        MeritWeights(0.6, 0.6)
    with pytest.raises(ConfigurationError):
        OptimizerConfig(variant="ego")
    with pytest.raises(ConfigurationError):
        OptimizerConfig(c1=0.0)
    with pytest.raises(ConfigurationError):
        run(quadratic(), OptimizerConfig(n_max=5))


def test_pure_design_run():
    obj = quadratic()
    rec = run(obj, OptimizerConfig(n_max=6))
    assert obj.calls == 6 and len(rec.curve) == 6
    assert rec.final_best_f == min(f for _, f in rec.curve)


@pytest.mark.parametrize("variant", ["sosa", "lmsrbf", "dycors"])
def test_quadratic_converges(variant):
    obj = quadratic()
    rec = run(obj, OptimizerConfig(variant=variant, n_max=60, seed=1))
    assert obj.calls == 60
    assert rec.final_best_f <= 1e-2
    assert obj.domain.contains(rec.final_best_x)


@pytest.mark.parametrize("variant", ["sosa", "lmsrbf", "dycors", "dds"])
def test_run_is_deterministic_and_monotone(variant):
    a = run(make_test_function("levy", d=5), OptimizerConfig(variant=variant, n_max=40, seed=9))
    b = run(make_test_function("levy", d=5), OptimizerConfig(variant=variant, n_max=40, seed=9))
    assert a.curve == b.curve and np.array_equal(a.final_best_x, b.final_best_x)
    values = a.best_values
    assert len(values) == 40 and np.all(np.diff(values) <= 0)
    assert [i for i, _ in a.curve] == list(range(1, 41))


def test_sosa_diagnostics():
    rec = run(make_test_function("ackley", d=6), OptimizerConfig(n_max=60, seed=2))
    assert rec.diagnostics["violations"] == 0
    assert rec.diagnostics["min_probability"] >= 1 / 6
    assert rec.diagnostics["min_perturbed"] >= 1


def test_dds_ackley30_progress():
    obj = make_test_function("ackley")
    rec = run(obj, OptimizerConfig(variant="dds", seed=0))
    assert obj.calls == 500
    assert rec.diagnostics["min_perturbed"] >= 1
    gap = rec.initial_best - obj.known_minimum
    assert rec.initial_best - rec.final_best_f >= 0.5 * gap


def test_rank_error_retry(monkeypatch):
    from sosa import optimizer as opt
    calls = {"n": 0}
    real = opt.CubicRBFInterpolant.fit

    def flaky(self, X, y):
        calls["n"] += 1
        if calls["n"] == 1:
            raise opt.SurrogateRankError("forced")
        return real(self, X, y)

    monkeypatch.setattr(opt.CubicRBFInterpolant, "fit", flaky)
    obj = quadratic()
    rec = run(obj, OptimizerConfig(n_max=10, seed=0))
    assert obj.calls == 10 and len(rec.curve) == 10


def test_estimator_wrapper():
    est = SurrogateOptimizer(variant="dycors", n_max=20, seed=4)
    assert clone(est).get_params()["variant"] == "dycors"
    est.fit(quadratic())
    assert est.best_f_ == est.record_.final_best_f
    with pytest.raises(ConfigurationError):
        est.fit(lambda x: 0.0)
    pickle.loads(pickle.dumps(est.record_))
