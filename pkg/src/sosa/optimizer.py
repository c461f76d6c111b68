"""Metric stochastic response surface engine and its four variants.

Each iteration fits a cubic RBF surrogate to every evaluated point, draws
random candidates around the incumbent, scores them by a random convex
combination of normalized surrogate value and (negated) distance to evaluated
points, and evaluates the best-scoring candidate.

Variants differ only in how candidates are perturbed:

``sosa``
    per-coordinate probabilities from surrogate sensitivities, half the
    candidates from the central-difference index and half from the
    eigenvector index
``lmsrbf``
    every coordinate is perturbed
``dycors``
    the same log-decaying probability for every coordinate
``dds``
    no surrogate; one greedy candidate per iteration
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.base import BaseEstimator

from .candidates import (
    SIGMA_LADDER,
    PerturbationPolicy,
    default_delta_min,
    default_n_candidates,
    dds_probability,
    generate,
    perturb,
    reflect_into_cube,
    select_coordinates,
)
from .doe import initial_design_size, latin_hypercube
from .domain import EvaluatedPoint, Objective, denormalize
from .exceptions import ConfigurationError, NumericError, SurrogateRankError
from .rbf import CubicRBFInterpolant
from .sensitivity import DEFAULT_DELTA, sensitivity_profile

logger = logging.getLogger(__name__)

VARIANTS = ("sosa", "lmsrbf", "dycors", "dds")
DDS_SIGMA = 0.2


@dataclass(frozen=True)
class MeritWeights:
    w_s: float
    w_d: float

    def __post_init__(self):
        if not (0.0 <= self.w_s <= 1.0 and 0.0 <= self.w_d <= 1.0) or abs(self.w_s + self.w_d - 1.0) > 1e-12:
            raise ConfigurationError("merit weights must be in [0, 1] and sum to 1")

    @classmethod
    def from_distance_weight(cls, w_d: float) -> "MeritWeights":
        return cls(1.0 - w_d, w_d)


@dataclass(frozen=True)
class OptimizerConfig:
    variant: str = "sosa"
    n_max: int = 500
    n0: Optional[int] = None  # defaults to 2(d+1)
    t: Optional[int] = None  # defaults to min(100 d, 5000)
    c1: Optional[float] = None  # defaults to 1/d
    improve_threshold: float = 1e-3
    seed: int = 0
    delta: float = DEFAULT_DELTA
    sigma_ladder: Tuple[float, ...] = SIGMA_LADDER

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigurationError(f"unknown variant {self.variant!r}; choose from {VARIANTS}")
        if self.n_max < 1:
            raise ConfigurationError("n_max must be positive")
        if self.c1 is not None and not 0.0 < self.c1 <= 1.0:
            raise ConfigurationError("c1 must lie in (0, 1]")
        if self.t is not None and self.t < 1:
            raise ConfigurationError("t must be positive")

    def resolved(self, d: int) -> "OptimizerConfig":
        """Fill dimension-dependent defaults."""
        cfg = replace(
            self,
            n0=initial_design_size(d) if self.n0 is None else self.n0,
            t=default_n_candidates(d) if self.t is None else self.t,
            c1=1.0 / d if self.c1 is None else self.c1,
        )
        if cfg.n0 > cfg.n_max:
            raise ConfigurationError(f"budget n_max={cfg.n_max} is smaller than the initial design n0={cfg.n0}")
        if cfg.n0 < d + 1:
            raise ConfigurationError(f"n0 must be at least d + 1 = {d + 1}")
        return cfg


@dataclass
class OptimizerState:
    """Evaluation history in unit-cube coordinates plus the incumbent."""

    X: np.ndarray
    F: np.ndarray
    n: int = 0
    best_index: int = -1
    current_weights: Optional[MeritWeights] = None
    last_improved: bool = False

    @classmethod
    def empty(cls, capacity: int, d: int) -> "OptimizerState":
        return cls(np.empty((capacity, d)), np.empty(capacity))

    @property
    def history(self) -> List[EvaluatedPoint]:
        return [EvaluatedPoint(self.X[i].copy(), float(self.F[i])) for i in range(self.n)]

    @property
    def best_x(self) -> np.ndarray:
        return self.X[self.best_index]

    @property
    def best_f(self) -> float:
        return float(self.F[self.best_index])

    def add(self, x, f: float, improve_threshold: float = 0.0) -> bool:
        """Append an evaluation; returns True if the incumbent changed."""
        self.X[self.n] = x
        self.F[self.n] = f
        improved = self.best_index < 0 or f < self.F[self.best_index]
        if improved:
            old = None if self.best_index < 0 else self.best_f
            self.best_index = self.n
            self.last_improved = old is not None and old - f > improve_threshold * max(1.0, abs(f))
        else:
            self.last_improved = False
        self.n += 1
        return improved


@dataclass
class TrialRecord:
    """Progress of one optimizer run.

    ``curve`` holds ``(eval_index, best_f_so_far)`` for eval_index 1..n_max.
    ``final_best_x`` is in raw coordinates.
    """

    algorithm: str
    problem: str
    seed: int
    curve: List[Tuple[int, float]]
    final_best_x: np.ndarray
    final_best_f: float
    wall_time_s: float = 0.0
    n_initial: int = 0
    diagnostics: dict = field(default_factory=dict)
    trial: int = 0

    @property
    def best_values(self) -> np.ndarray:
        return np.array([f for _, f in self.curve])

    @property
    def initial_best(self) -> float:
        """Best value of the initial design alone."""
        return self.curve[self.n_initial - 1][1]


def surrogate_score(values) -> np.ndarray:
    """Affine map of surrogate values onto [0, 1]; all ones if they are equal."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ConfigurationError("need at least one value")
    if not np.all(np.isfinite(values)):
        raise NumericError("surrogate values must be finite")
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.ones_like(values)
    return (values - lo) / (hi - lo)


def _distance_scores(dist) -> np.ndarray:
    lo, hi = dist.min(), dist.max()
    if hi == lo:
        return np.ones_like(dist)
    return (hi - dist) / (hi - lo)


def distance_score(candidates, evaluated) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(scores, raw_min_distances)``; remote candidates score 0."""
    dist = cdist(np.atleast_2d(candidates), np.atleast_2d(evaluated)).min(axis=1)
    return _distance_scores(dist), dist


def select_next(candidates, surrogate_values, evaluated, weights: MeritWeights,
                min_distances=None) -> Tuple[int, np.ndarray]:
    """Index of the candidate minimizing the merit (first on ties) and all merits.

    ``min_distances`` may be passed to skip recomputing distances to ``evaluated``.
    """
    vs = surrogate_score(surrogate_values)
    if min_distances is None:
        vd, _ = distance_score(candidates, evaluated)
    else:
        vd = _distance_scores(np.asarray(min_distances, dtype=float))
    merit = weights.w_s * vs + weights.w_d * vd
    return int(np.argmin(merit)), merit


def next_weights(state: OptimizerState, improve_threshold: float, rng: np.random.Generator) -> MeritWeights:
    """Keep the previous weights after a significant improvement, otherwise draw ``w_d ~ U[0, 1]``.

    ``improve_threshold`` is applied when the state records the improvement
    (see :meth:`OptimizerState.add`).
    """
    if state.last_improved and state.current_weights is not None:
        return state.current_weights
    return MeritWeights.from_distance_weight(float(rng.random()))


def _initial_design(objective, cfg, rng, state):
    d = objective.dimension
    for x in latin_hypercube(d, cfg.n0, rng):
        state.add(x, objective.evaluate_unit(x), cfg.improve_threshold)


def _make_record(objective, cfg, state, start, diagnostics):
    best = np.minimum.accumulate(state.F[:state.n])
    return TrialRecord(
        algorithm=cfg.variant,
        problem=objective.name,
        seed=cfg.seed,
        curve=[(i + 1, float(v)) for i, v in enumerate(best)],
        final_best_x=denormalize(state.best_x, objective.domain),
        final_best_f=state.best_f,
        wall_time_s=time.perf_counter() - start,
        n_initial=cfg.n0,
        diagnostics=diagnostics,
    )


def _policies(cfg, d, state, model):
    t = cfg.t
    if cfg.variant == "lmsrbf":
        return [(PerturbationPolicy.all_coordinates(d, cfg.sigma_ladder), t)]
    if cfg.variant == "dycors":
        return [(PerturbationPolicy.dycors(d, state.n, cfg.n0, cfg.n_max, cfg.sigma_ladder), t)]
    profile = sensitivity_profile(model, state.best_x, cfg.c1, cfg.delta)
    half = t // 2
    return [
        (PerturbationPolicy.sensitivity(profile.p1, cfg.c1, cfg.sigma_ladder), t - half),
        (PerturbationPolicy.sensitivity(profile.p2, cfg.c1, cfg.sigma_ladder), half),
    ]


def run(objective: Objective, config: OptimizerConfig) -> TrialRecord:
    """Minimize ``objective`` with exactly ``config.n_max`` evaluations."""
    if config.variant == "dds":
        return run_dds(objective, config)
    start = time.perf_counter()
    d = objective.dimension
    cfg = config.resolved(d)
    rng = np.random.default_rng(cfg.seed)
    state = OptimizerState.empty(cfg.n_max, d)
    delta_min = default_delta_min(d)
    diag = {"min_probability": 1.0, "min_perturbed": d, "violations": 0, "ridge_fits": 0, "fallbacks": 0}

    _initial_design(objective, cfg, rng, state)
    while state.n < cfg.n_max:
        X = state.X[:state.n]
        try:
            model = CubicRBFInterpolant().fit(X, state.F[:state.n])
        except SurrogateRankError:
            x = rng.random(d)
            state.add(x, objective.evaluate_unit(x), cfg.improve_threshold)
            continue
        diag["ridge_fits"] += model.ridge_used_ > 0

        policies = _policies(cfg, d, state, model)
        cands = generate(state.best_x, policies, X, delta_min, rng)

        # convergence conditions: probability floor and at least one perturbed coordinate
        if cfg.variant == "sosa":
            p_min = min(float(p.probabilities.min()) for p, _ in policies)
            diag["min_probability"] = min(diag["min_probability"], p_min)
            diag["violations"] += int(p_min < cfg.c1)
        n_pert = int(cands.perturbed_masks.sum(axis=1).min())
        diag["min_perturbed"] = min(diag["min_perturbed"], n_pert)
        diag["violations"] += int(n_pert < 1)
        diag["fallbacks"] += int(cands.fallback.sum())

        s = model.predict_near(state.best_x, cands.points)
        weights = next_weights(state, cfg.improve_threshold, rng)
        state.current_weights = weights
        idx, _ = select_next(cands.points, s, X, weights, min_distances=cands.min_distances)
        x = cands.points[idx]
        state.add(x, objective.evaluate_unit(x), cfg.improve_threshold)

    if diag["violations"]:
        logger.warning("%d convergence-condition violations in %s run", diag["violations"], cfg.variant)
    return _make_record(objective, cfg, state, start, diag)


def run_dds(objective: Objective, config: OptimizerConfig) -> TrialRecord:
    """Dynamically dimensioned search from the same initial design.

    Iteration ``i`` of ``m = n_max - n0`` perturbs each coordinate of the
    incumbent with probability ``1 - log(i)/log(m)`` (at least one always),
    using ``sigma = 0.2`` in unit-cube units, and accepts only strict
    improvements.
    """
    start = time.perf_counter()
    d = objective.dimension
    cfg = replace(config, variant="dds").resolved(d)
    rng = np.random.default_rng(cfg.seed)
    state = OptimizerState.empty(cfg.n_max, d)
    diag = {"min_perturbed": d, "violations": 0}

    _initial_design(objective, cfg, rng, state)
    m = cfg.n_max - cfg.n0
    for i in range(1, m + 1):
        mask = select_coordinates(np.full(d, dds_probability(i, m)), rng)
        diag["min_perturbed"] = min(diag["min_perturbed"], int(mask.sum()))
        diag["violations"] += int(not mask.any())
        x = reflect_into_cube(perturb(state.best_x, mask, (DDS_SIGMA,), rng))
        state.add(x, objective.evaluate_unit(x))
    return _make_record(objective, cfg, state, start, diag)


class SurrogateOptimizer(BaseEstimator):
    """Estimator-style front end to :func:`run`.

    Parameters mirror :class:`OptimizerConfig`; ``fit(objective)`` runs one
    optimization and stores the outcome.

    Attributes
    ----------
    record_ : TrialRecord
    best_x_ : ndarray
        Best point found, raw coordinates.
    best_f_ : float
    """

    def __init__(self, variant="sosa", n_max=500, n0=None, t=None, c1=None,
                 improve_threshold=1e-3, seed=0, delta=DEFAULT_DELTA):
        self.variant = variant
        self.n_max = n_max
        self.n0 = n0
        self.t = t
        self.c1 = c1
        self.improve_threshold = improve_threshold
        self.seed = seed
        self.delta = delta

    def fit(self, objective: Objective, y=None):
        if not isinstance(objective, Objective):
            raise ConfigurationError("fit expects an Objective instance")
        cfg = OptimizerConfig(**self.get_params())
        self.record_ = run(objective, cfg)
        self.best_x_ = self.record_.final_best_x
        self.best_f_ = self.record_.final_best_f
        return self
