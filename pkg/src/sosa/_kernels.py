"""Compiled inner loop for points that are perturbations of one center."""

import numpy as np
from numba import njit


@njit(cache=True, fastmath=True)
def _finish(cross, base, step_sq, lam, with_values):
    t, n = cross.shape
    values = np.zeros(t)
    min_sq = np.empty(t)
    for k in range(t):
        acc = 0.0
        m = np.inf
        for j in range(n):
            v = max(base[j] + step_sq[k] + 2.0 * cross[k, j], 0.0)
            m = min(m, v)
            if with_values:
                acc += lam[j] * v * np.sqrt(v)
        values[k] = acc
        min_sq[k] = m
    return values, min_sq


def near_kernel_sums(center, Y, C, lam=None):
    """For each row ``y`` of ``Y`` return ``sum_j lam_j |y - c_j|^3`` and ``min_j |y - c_j|^2``.

    Distances come from ``|y - c|^2 = |b - c|^2 + |y - b|^2 + 2 (y - b).(b - c)``
    with ``b = center``, which stays accurate when ``y`` is close to ``b``.
    Absolute error in the squared distance is about ``eps * max|b - c|^2``.
    """
    center = np.asarray(center, dtype=float)
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    E = center - np.asarray(C, dtype=float)
    base = np.einsum("ij,ij->i", E, E)
    step = Y - center
    step_sq = np.einsum("ij,ij->i", step, step)
    with_values = lam is not None
    lam = np.zeros(0) if lam is None else np.ascontiguousarray(lam, dtype=float)
    return _finish(step @ E.T, base, step_sq, lam, with_values)
