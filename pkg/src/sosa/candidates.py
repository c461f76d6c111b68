"""Random candidate points around the incumbent.

A candidate is built by choosing coordinates to perturb (each independently
with its own probability, at least one always), adding a normal perturbation
with a standard deviation drawn per coordinate from a fixed ladder, and folding
the result back into the unit cube by successive reflection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from .exceptions import ConfigurationError, NumericError
from ._kernels import near_kernel_sums

SIGMA_LADDER = (0.2, 0.1, 0.05, 0.025, 0.0125)
MAX_REDRAWS = 10


def default_n_candidates(d: int) -> int:
    return min(100 * d, 5000)


def default_delta_min(d: int) -> float:
    return 1e-6 * np.sqrt(d)


@dataclass(frozen=True)
class PerturbationPolicy:
    """How one group of candidates is perturbed.

    ``kind`` is one of ``"all"`` (every coordinate), ``"dycors"``, ``"dds"``
    or ``"sensitivity"``; the factory class methods fill in ``probabilities``.
    With ``sigma_per_candidate`` one ladder value is shared by all coordinates
    of a candidate instead of being drawn per coordinate.
    """

    kind: str
    probabilities: np.ndarray
    sigma_ladder: Tuple[float, ...] = SIGMA_LADDER
    c1: float = 0.0
    sigma_per_candidate: bool = False

    def __post_init__(self):
        ladder = np.asarray(self.sigma_ladder, dtype=float)
        if ladder.size == 0 or np.any(ladder <= 0) or np.any(ladder > 1) or np.any(np.diff(ladder) >= 0):
            raise ConfigurationError("sigma ladder must be strictly decreasing values in (0, 1]")
        p = np.asarray(self.probabilities, dtype=float)
        if np.any(p < 0) or np.any(p > 1):
            raise ConfigurationError("probabilities must lie in [0, 1]")
        if self.kind in ("all", "sensitivity") and np.any(p < self.c1):
            raise ConfigurationError("probabilities fall below the c1 floor")
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "sigma_ladder", tuple(float(s) for s in ladder))

    @classmethod
    def all_coordinates(cls, d, sigma_ladder=SIGMA_LADDER):
        # isotropic step per candidate, as in the original local metric RBF method
        return cls("all", np.ones(d), sigma_ladder, c1=1.0, sigma_per_candidate=True)

    @classmethod
    def sensitivity(cls, p, c1, sigma_ladder=SIGMA_LADDER):
        return cls("sensitivity", p, sigma_ladder, c1=c1)

    @classmethod
    def dycors(cls, d, n, n0, n_max, sigma_ladder=SIGMA_LADDER):
        return cls("dycors", np.full(d, dycors_probability(d, n, n0, n_max)), sigma_ladder)

    @classmethod
    def dds(cls, d, iteration, n_iterations, sigma=0.2):
        return cls("dds", np.full(d, dds_probability(iteration, n_iterations)), (sigma,))


def dycors_probability(d, n, n0, n_max) -> float:
    """``p0 * (1 - log(n - n0 + 1) / log(n_max - n0))`` with ``p0 = min(1, 20/d)``."""
    p0 = min(1.0, 20.0 / d)
    if n_max - n0 <= 1:
        return p0
    return float(np.clip(p0 * (1.0 - np.log(n - n0 + 1) / np.log(n_max - n0)), 0.0, 1.0))


def dds_probability(iteration, n_iterations) -> float:
    """``1 - log(i) / log(m)`` for iteration ``i`` of ``m``."""
    if n_iterations <= 1:
        return 1.0
    return float(np.clip(1.0 - np.log(iteration) / np.log(n_iterations), 0.0, 1.0))


def select_coordinates(probabilities, rng: np.random.Generator, size: Optional[int] = None) -> np.ndarray:
    """Boolean perturbation mask(s).

    A row with nothing selected gets one of the most probable coordinates
    (uniformly among ties) switched on.
    """
    p = np.asarray(probabilities, dtype=float)
    mask = rng.random(p.shape if size is None else (size, p.size)) <= p
    mask2d = mask.reshape(-1, p.size)
    empty = np.flatnonzero(~mask2d.any(axis=1))
    if empty.size:
        ties = np.flatnonzero(p == p.max())
        mask2d[empty, ties[rng.integers(ties.size, size=empty.size)]] = True
    return mask


def perturb(best, mask, sigma_ladder, rng: np.random.Generator, per_candidate: bool = False) -> np.ndarray:
    """Add ``N(0, sigma^2)`` noise on masked coordinates.

    ``sigma`` is drawn uniformly from ``sigma_ladder`` for every perturbed
    coordinate, or once per row when ``per_candidate`` is set. No reflection
    is applied here.
    """
    mask = np.asarray(mask, dtype=bool)
    ladder = np.asarray(sigma_ladder, dtype=float)
    out = np.broadcast_to(np.asarray(best, dtype=float), mask.shape).copy()
    k = np.count_nonzero(mask)
    if per_candidate:
        rows = mask.reshape(-1, mask.shape[-1])
        row_sigma = ladder[rng.integers(ladder.size, size=rows.shape[0])]
        sigma = np.repeat(row_sigma, rows.sum(axis=1))
    else:
        sigma = ladder[rng.integers(ladder.size, size=k)]
    out[mask] += sigma * rng.standard_normal(k)
    return out


def reflect_into_cube(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise NumericError("cannot reflect non-finite coordinates")
    out = y.copy()
    outside = (y < 0.0) | (y > 1.0)
    folded = np.mod(y[outside], 2.0)
    folded = np.where(folded > 1.0, 2.0 - folded, folded)
    out[outside] = np.clip(folded, 0.0, 1.0)
    return out


@dataclass
class CandidateSet:
    """Candidates with their perturbation masks.

    ``min_distances`` holds each candidate's distance to the nearest evaluated
    point. ``fallback`` flags rows replaced by uniform points after repeated
    near-duplicate draws.
    """

    points: np.ndarray
    perturbed_masks: np.ndarray
    fallback: np.ndarray
    min_distances: np.ndarray = field(repr=False)

    def __len__(self):
        return self.points.shape[0]


def _draw(best, policy, count, rng):
    masks = select_coordinates(policy.probabilities, rng, size=count)
    y = perturb(best, masks, policy.sigma_ladder, rng, per_candidate=policy.sigma_per_candidate)
    return reflect_into_cube(y), masks


def generate(best, policies: Sequence[Tuple[PerturbationPolicy, int]], evaluated, delta_min: float,
             rng: np.random.Generator) -> CandidateSet:
    """Draw ``sum(count)`` candidates around ``best``.

    Candidates closer than ``delta_min`` to an evaluated point are redrawn with
    the same policy up to 10 times, then replaced by uniform points.
    """
    best = np.asarray(best, dtype=float)
    evaluated = np.atleast_2d(np.asarray(evaluated, dtype=float))
    total = sum(count for _, count in policies)
    if total < 1:
        raise ConfigurationError("need at least one candidate")

    blocks, mask_blocks, owner = [], [], []
    for k, (policy, count) in enumerate(policies):
        if count <= 0:
            continue
        pts, masks = _draw(best, policy, count, rng)
        blocks.append(pts)
        mask_blocks.append(masks)
        owner.append(np.full(count, k))
    points = np.vstack(blocks)
    masks = np.vstack(mask_blocks)
    owner = np.concatenate(owner)
    fallback = np.zeros(total, dtype=bool)

    _, min_sq = near_kernel_sums(best, points, evaluated)
    dist = np.sqrt(min_sq)
    # the fast distances are inexact near zero: recheck those rows exactly
    near = np.flatnonzero(dist < 4.0 * delta_min + 1e-6)
    if near.size:
        dist[near] = cdist(points[near], evaluated).min(axis=1)
    bad = near[dist[near] < delta_min]
    for _ in range(MAX_REDRAWS):
        if bad.size == 0:
            break
        for k in np.unique(owner[bad]):
            rows = bad[owner[bad] == k]
            points[rows], masks[rows] = _draw(best, policies[k][0], rows.size, rng)
        dist[bad] = cdist(points[bad], evaluated).min(axis=1)
        bad = bad[dist[bad] < delta_min]
    if bad.size:
        points[bad] = rng.random((bad.size, best.size))
        masks[bad] = True
        fallback[bad] = True
        dist[bad] = cdist(points[bad], evaluated).min(axis=1)
    return CandidateSet(points, masks, fallback, dist)
