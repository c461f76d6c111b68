"""Box domains, unit-cube normalization and the counted objective wrapper."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .exceptions import ConfigurationError, DomainError, NumericError


@dataclass(frozen=True)
class Hypercube:
    """Axis-aligned box ``[lower, upper]`` in R^d."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size < 1:
            raise ConfigurationError("lower and upper must be 1-d vectors of equal length >= 1")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigurationError("bounds must be finite")
        if np.any(lower >= upper):
            raise ConfigurationError("lower[i] < upper[i] must hold for every i")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, low: float, high: float, d: int) -> "Hypercube":
        return cls(np.full(d, float(low)), np.full(d, float(high)))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


def normalize(x_raw, domain: Hypercube) -> np.ndarray:
    """Map raw coordinates in ``domain`` to the unit cube.

    Accepts a single point of shape (d,) or a batch of shape (m, d).
    """
    x = np.asarray(x_raw, dtype=float)
    if x.shape[-1] != domain.dim:
        raise DomainError(f"expected {domain.dim} coordinates, got {x.shape[-1]}")
    if not np.all(np.isfinite(x)):
        raise NumericError("point has non-finite coordinates")
    if np.any(x < domain.lower) or np.any(x > domain.upper):
        raise DomainError("point lies outside the domain")
    return (x - domain.lower) / domain.width


def denormalize(u, domain: Hypercube) -> np.ndarray:
    """Inverse of :func:`normalize`; the result is clipped to the box against rounding."""
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != domain.dim:
        raise DomainError(f"expected {domain.dim} coordinates, got {u.shape[-1]}")
    if np.any(u < 0.0) or np.any(u > 1.0):
        raise DomainError("unit-cube point outside [0, 1]")
    return np.clip(domain.lower + u * domain.width, domain.lower, domain.upper)


@dataclass(frozen=True)
class EvaluatedPoint:
    x: np.ndarray  # unit-cube coordinates
    f: float


@dataclass
class Objective:
    """A deterministic black-box function on a box, with an evaluation counter.

    One instance must not be shared between threads: the counter is unsynchronized.

    Parameters
    ----------
    func : callable
        Maps a raw point of shape (d,) to a float.
    domain : Hypercube
    name : str
    known_minimum : float, optional
        Exact global minimum of ``func`` on ``domain`` when it is known.
    min_bound : float, optional
        Published upper bound on the minimum (minimum is at most this value).
    """

    func: Callable[[np.ndarray], float]
    domain: Hypercube
    name: str = "objective"
    known_minimum: Optional[float] = None
    min_bound: Optional[float] = None
    calls: int = field(default=0, init=False)

    @property
    def dimension(self) -> int:
        return self.domain.dim

    @property
    def reference_minimum(self) -> Optional[float]:
        """Exact minimum if known, otherwise the published bound."""
        return self.known_minimum if self.known_minimum is not None else self.min_bound

    def evaluate(self, x_raw) -> float:
        x = np.asarray(x_raw, dtype=float)
        if x.shape != (self.dimension,):
            raise DomainError(f"expected a point of shape ({self.dimension},), got {x.shape}")
        if not self.domain.contains(x):
            raise DomainError(f"{self.name}: point outside the domain")
        self.calls += 1
        return float(self.func(x))

    __call__ = evaluate

    def evaluate_unit(self, u) -> float:
        return self.evaluate(denormalize(u, self.domain))

    def reset_counter(self) -> None:
        self.calls = 0
