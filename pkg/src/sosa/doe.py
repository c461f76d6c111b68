"""Initial space-filling designs on the unit cube."""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import pdist

from .exceptions import ConfigurationError, DesignError


def initial_design_size(d: int) -> int:
    return 2 * (d + 1)


def _random_lhs(d, m, rng):
    # one stratum per row in every column, uniform position inside the stratum
    strata = np.argsort(rng.random((m, d)), axis=0)
    return (strata + rng.random((m, d))) / m


def has_full_tail_rank(points) -> bool:
    points = np.asarray(points)
    aug = np.hstack([np.ones((points.shape[0], 1)), points])
    return np.linalg.matrix_rank(aug) == points.shape[1] + 1


def latin_hypercube(d: int, m: int, rng: np.random.Generator, n_draws: int = 50,
                    max_retries: int = 100) -> np.ndarray:
    """Maximin-improved Latin hypercube of ``m`` points in ``[0, 1]^d``.

    The best of ``n_draws`` random designs by minimal pairwise distance is
    kept. Designs whose augmented matrix ``[1 | X]`` is rank deficient are
    discarded and redrawn.

    Raises
    ------
    DesignError
        If no full-rank design is found after ``max_retries`` attempts.
    """
    if d < 1 or m < 1:
        raise ConfigurationError("d and m must be positive")
    if m < d + 1:
        raise ConfigurationError(f"need m >= d + 1 points for a full-rank design, got m={m}, d={d}")
    for _ in range(max_retries):
        best, best_score = None, -np.inf
        for _ in range(n_draws):
            X = _random_lhs(d, m, rng)
            score = pdist(X).min() if m > 1 else 0.0
            if score > best_score:
                best, best_score = X, score
        if has_full_tail_rank(best):
            return best
    raise DesignError(f"no full-rank design for d={d}, m={m} after {max_retries} retries")
