"""Local sensitivity of a surrogate around the incumbent.

Two indices are computed on the surrogate ``s`` at a center point with step
``delta`` (perturbed coordinates are clipped to the unit cube):

* ``si1_index``: central differences ``|s(x + delta e_i) - s(x - delta e_i)|``.
* ``si2_index``: absolute leading eigenvector of the matrix of largest
  uni- and bivariate perturbation responses (``perturbation_matrix``).

Both are mapped to per-coordinate perturbation probabilities in ``[c1, 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_DELTA = 0.05
TIE_RTOL = 1e-9


@dataclass(frozen=True)
class SensitivityProfile:
    si1: np.ndarray
    si2: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    delta: float
    center: np.ndarray


def _evaluate(model, center, X):
    if hasattr(model, "predict_near"):
        return model.predict_near(center, X)
    if hasattr(model, "predict"):
        return model.predict(X)
    return np.asarray(model(X), dtype=float)


def si1_index(model, center, delta: float = DEFAULT_DELTA) -> np.ndarray:
    center = np.asarray(center, dtype=float)
    d = center.size
    steps = delta * np.eye(d)
    up = np.clip(center + steps, 0.0, 1.0)
    down = np.clip(center - steps, 0.0, 1.0)
    values = _evaluate(model, center, np.vstack([up, down]))
    return np.abs(values[:d] - values[d:])


def _bivariate_points(center, delta):
    d = center.size
    i, j = np.triu_indices(d, k=1)
    signs = np.array([(1, 1), (-1, 1), (1, -1), (-1, -1)], dtype=float)
    pts = np.repeat(center[None, :], 4 * i.size, axis=0)
    rows = np.arange(4 * i.size)
    ii = np.repeat(i, 4)
    jj = np.repeat(j, 4)
    pts[rows, ii] += np.tile(signs[:, 0], i.size) * delta
    pts[rows, jj] += np.tile(signs[:, 1], i.size) * delta
    return np.clip(pts, 0.0, 1.0), i, j


def perturbation_matrix(model, center, delta: float = DEFAULT_DELTA) -> np.ndarray:
    """Symmetric matrix of largest absolute surrogate changes.

    Off-diagonal entry ``(i, j)`` is the largest ``|s(x') - s(x)|`` over the
    four sign combinations of moving coordinates ``i`` and ``j`` by ``delta``;
    the diagonal uses the two univariate moves. All ``2d + 2d(d-1) + 1``
    surrogate values are computed in a single batch.
    """
    center = np.asarray(center, dtype=float)
    d = center.size
    steps = delta * np.eye(d)
    uni = np.vstack([np.clip(center + steps, 0.0, 1.0), np.clip(center - steps, 0.0, 1.0)])
    bi, i, j = _bivariate_points(center, delta)
    values = _evaluate(model, center, np.vstack([center[None, :], uni, bi]))
    base, uni_v, bi_v = values[0], values[1:1 + 2 * d], values[1 + 2 * d:]

    L = np.zeros((d, d))
    L[np.arange(d), np.arange(d)] = np.maximum(np.abs(uni_v[:d] - base), np.abs(uni_v[d:] - base))
    if i.size:
        off = np.abs(bi_v - base).reshape(-1, 4).max(axis=1)
        L[i, j] = off
        L[j, i] = off
    return L


def si2_index(L) -> np.ndarray:
    """Absolute leading eigenvector of ``L``, scaled to unit max-norm.

    Returns all ones for the zero matrix or when the two largest eigenvalue
    magnitudes tie within a relative 1e-9.
    """
    L = np.asarray(L, dtype=float)
    d = L.shape[0]
    if d == 1 or not np.any(L):
        return np.ones(d)
    evals, evecs = np.linalg.eigh(0.5 * (L + L.T))
    mags = np.abs(evals)
    order = np.argsort(mags)[::-1]
    top, second = mags[order[0]], mags[order[1]]
    if top - second <= TIE_RTOL * top:
        return np.ones(d)
    v = np.abs(evecs[:, order[0]])
    return v / v.max()


def probabilities(si, c1: float) -> np.ndarray:
    """Max-normalize sensitivities and clamp them to ``[c1, 1]``."""
    si = np.asarray(si, dtype=float)
    top = si.max()
    if top <= 0.0:
        return np.full(si.shape, float(c1))
    p = np.maximum(c1, si / top)
    p[si == top] = 1.0
    return p


def sensitivity_profile(model, center, c1: float, delta: float = DEFAULT_DELTA) -> SensitivityProfile:
    center = np.asarray(center, dtype=float)
    si1 = si1_index(model, center, delta)
    si2 = si2_index(perturbation_matrix(model, center, delta))
    return SensitivityProfile(si1=si1, si2=si2, p1=probabilities(si1, c1),
                              p2=probabilities(si2, c1), delta=delta, center=center)
