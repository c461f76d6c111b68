"""Synthetic multimodal test problems.

Every function accepts a single point of shape (d,) or a batch of shape (m, d)
in raw coordinates. Domains and minimum bounds follow the usual 30/35-d
benchmark table (Ackley, Rastrigin, Levy, Keane, Michalewicz, Schoen).
"""

from __future__ import annotations

import re
from typing import Optional

import numpy as np

from .domain import Hypercube, Objective
from .exceptions import ConfigurationError

TWO_PI = 2.0 * np.pi


def ackley(x):
    """Ackley without the usual ``+20+e`` offset, so the minimum is ``-20-e`` at 0."""
    x = np.asarray(x, dtype=float)
    rms = np.sqrt(np.mean(x**2, axis=-1))
    return -20.0 * np.exp(-0.2 * rms) - np.exp(np.mean(np.cos(TWO_PI * x), axis=-1))


def rastrigin(x, shift=4.5):
    """Shifted Rastrigin ``sum((x-c)^2 - cos(2 pi (x-c)))``; minimum ``-d`` at ``x = c``."""
    z = np.asarray(x, dtype=float) - shift
    return np.sum(z**2 - np.cos(TWO_PI * z), axis=-1)


def levy(x):
    x = np.asarray(x, dtype=float)
    w = 1.0 + (x - 1.0) / 4.0
    head = np.sin(np.pi * w[..., 0]) ** 2
    body = np.sum((w[..., :-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * w[..., :-1] + 1.0) ** 2), axis=-1)
    tail = (w[..., -1] - 1.0) ** 2 * (1.0 + np.sin(TWO_PI * w[..., -1]) ** 2)
    return head + body + tail


def keane(x):
    """Keane's bump function (unconstrained, sign flipped for minimization)."""
    x = np.asarray(x, dtype=float)
    c = np.cos(x)
    num = np.abs(np.sum(c**4, axis=-1) - 2.0 * np.prod(c**2, axis=-1))
    i = np.arange(1, x.shape[-1] + 1)
    return -num / np.sqrt(np.sum(i * x**2, axis=-1))


def michalewicz(x, m=10):
    x = np.asarray(x, dtype=float)
    i = np.arange(1, x.shape[-1] + 1)
    return -np.sum(np.sin(x) * np.sin(i * x**2 / np.pi) ** (2 * m), axis=-1)


class Schoen:
    """Randomly generated Schoen function.

    ``f(x) = sum_i f_i prod_{j!=i} |x-z_j|^2 / sum_i prod_{j!=i} |x-z_j|^2``,
    which reduces to inverse-squared-distance weighting of the node values. The
    minimum is exactly ``min(f_i)``, attained at the matching node.
    """

    def __init__(self, d, seed=0, n_nodes=30, depth=100.0):
        rng = np.random.default_rng(seed)
        self.nodes = rng.uniform(0.0, 1.0, size=(n_nodes, d))
        self.values = rng.uniform(-depth, 0.0, size=n_nodes)
        self.values[rng.integers(n_nodes)] = -depth

    @property
    def minimum(self) -> float:
        return float(self.values.min())

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        r2 = np.sum((x[:, None, :] - self.nodes[None, :, :]) ** 2, axis=-1)
        out = np.empty(x.shape[0])
        hit = r2 == 0.0
        exact = hit.any(axis=1)
        out[exact] = self.values[np.argmax(hit[exact], axis=1)]
        w = 1.0 / r2[~exact]
        out[~exact] = (w @ self.values) / w.sum(axis=1)
        return out[0] if single else out


# name -> (domain low, domain high, default d, published minimum bound, exact-at-table-d)
SUITE = {
    "ackley": (-15.0, 20.0, 30, -20.0 - np.e, True),
    "rastrigin": (4.0, 5.0, 30, -30.0, True),
    "levy": (-5.0, 5.0, 30, -11.0, False),
    "keane": (1.0, 10.0, 30, -0.39, False),
    "michalewicz": (0.0, np.pi, 30, -23.0, False),
    "schoen": (0.0, 1.0, 35, -80.0, False),
}


def make_test_function(name: str, d: Optional[int] = None, seed: int = 0) -> Objective:
    """Build a suite problem as an :class:`Objective`.

    ``seed`` only affects the Schoen instance.
    """
    key = name.lower()
    if key not in SUITE:
        raise ConfigurationError(f"unknown test function {name!r}; choose from {sorted(SUITE)}")
    low, high, default_d, bound, _ = SUITE[key]
    d = default_d if d is None else int(d)
    if d < 2:
        raise ConfigurationError("test functions need d >= 2")
    domain = Hypercube.uniform(low, high, d)
    min_bound = bound if d == default_d else None
    known = None
    if key == "ackley":
        func, known = ackley, -20.0 - np.e
    elif key == "rastrigin":
        func, known = rastrigin, -float(d)
    elif key == "levy":
        func, known = levy, 0.0
    elif key == "keane":
        func = keane
    elif key == "michalewicz":
        func = michalewicz
    else:
        func = Schoen(d, seed=seed)
        known = func.minimum
    return Objective(func, domain, name=f"{key}{d}", known_minimum=known, min_bound=min_bound)


_PROBLEM_RE = re.compile(r"^([a-z]+?)(\d+)?$")


def parse_problem(identifier: str, seed: int = 0) -> Objective:
    """Resolve identifiers such as ``"ackley30"`` or ``"schoen"``."""
    m = _PROBLEM_RE.match(identifier.strip().lower())
    if m is None or m.group(1) not in SUITE:
        raise ConfigurationError(f"unknown problem {identifier!r}")
    d = int(m.group(2)) if m.group(2) else None
    return make_test_function(m.group(1), d, seed=seed)
