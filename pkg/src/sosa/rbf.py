"""Cubic radial basis function interpolant with a linear polynomial tail."""

from __future__ import annotations

import logging
import warnings
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._kernels import near_kernel_sums
from .domain import EvaluatedPoint
from .exceptions import DataError, SurrogateRankError

logger = logging.getLogger(__name__)

_RIDGE_START = 1e-10
_RIDGE_MAX = 1e2


def cubic_kernel(r):
    return r * r * r


def augmented_system(X, y):
    """Return the symmetric interpolation matrix and right-hand side.

    ``[[Phi, P], [P^T, 0]] [lam; c] = [y; 0]`` with ``Phi_ij = |x_i - x_j|^3``
    and ``P = [1 | X]``.
    """
    n, d = X.shape
    A = np.zeros((n + d + 1, n + d + 1))
    A[:n, :n] = cubic_kernel(cdist(X, X))
    A[:n, n] = 1.0
    A[:n, n + 1:] = X
    A[n:, :n] = A[:n, n:].T
    rhs = np.concatenate([y, np.zeros(d + 1)])
    return A, rhs


class CubicRBFInterpolant(RegressorMixin, BaseEstimator):
    """Interpolant ``s(x) = sum_i lam_i |x - x_i|^3 + c_0 + c^T x``.

    The coefficients solve the augmented symmetric system with a
    Bunch-Kaufman factorization. When that factorization reports a singular or
    ill-conditioned matrix, a ridge ``eps * I`` is added to the kernel block,
    doubling ``eps`` from 1e-10 until the solve succeeds.

    Attributes
    ----------
    centers_ : ndarray of shape (n, d)
    rbf_weights_ : ndarray of shape (n,)
    tail_weights_ : ndarray of shape (d + 1,)
        Constant term first, then the linear coefficients.
    ridge_used_ : float
        Zero unless the ridge fallback fired.
    """

    def fit(self, X, y):
        X = check_array(X, dtype=float, ensure_all_finite=True, ensure_min_samples=2)
        y = np.asarray(y, dtype=float).ravel()
        if y.shape[0] != X.shape[0]:
            raise DataError(f"X has {X.shape[0]} rows but y has {y.shape[0]} values")
        if not np.all(np.isfinite(y)):
            raise DataError("function values must be finite")
        n, d = X.shape
        P = np.hstack([np.ones((n, 1)), X])
        if n < d + 1 or np.linalg.matrix_rank(P) < d + 1:
            raise SurrogateRankError(f"[1 | X] has rank < {d + 1} with n={n} points; add points")

        A, rhs = augmented_system(X, y)
        ridge = 0.0
        while True:
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
                    coef = scipy.linalg.solve(A, rhs, assume_a="sym", check_finite=False)
                if np.all(np.isfinite(coef)):
                    break
            except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning):
                pass
            ridge = _RIDGE_START if ridge == 0.0 else 2.0 * ridge
            if ridge > _RIDGE_MAX:
                raise DataError("interpolation system could not be solved even with ridge regularization")
            A[np.arange(n), np.arange(n)] = ridge
        if ridge > 0.0:
            logger.warning("RBF fit needed ridge %.3g (near-duplicate centers?)", ridge)

        self.centers_ = X
        self.rbf_weights_ = coef[:n]
        self.tail_weights_ = coef[n:]
        self.ridge_used_ = ridge
        self.n_features_in_ = d
        return self

    def predict_from_distances(self, distances, X):
        """Evaluate from a precomputed ``cdist(X, centers_)`` matrix."""
        # row-wise reductions keep each prediction independent of the batch size
        kernel = np.multiply(cubic_kernel(distances), self.rbf_weights_).sum(axis=1)
        tail = self.tail_weights_[0] + np.multiply(X, self.tail_weights_[1:]).sum(axis=1)
        return kernel + tail

    def predict_near(self, center, X):
        """Predictions for points that differ from ``center`` in few coordinates.

        Agrees with :meth:`predict` up to rounding; much cheaper for the
        sparse perturbations used by the candidate and sensitivity routines.
        """
        check_is_fitted(self, "rbf_weights_")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        kernel, _ = near_kernel_sums(center, X, self.centers_, self.rbf_weights_)
        return kernel + self.tail_weights_[0] + X @ self.tail_weights_[1:]

    def predict(self, X):
        check_is_fitted(self, "rbf_weights_")
        X = check_array(X, dtype=float, ensure_min_samples=0)
        if X.shape[0] == 0:
            return np.empty(0)
        return self.predict_from_distances(cdist(X, self.centers_), X)


def fit(points: Sequence[EvaluatedPoint]) -> CubicRBFInterpolant:
    X = np.array([p.x for p in points], dtype=float)
    y = np.array([p.f for p in points], dtype=float)
    return CubicRBFInterpolant().fit(X, y)


def predict(model: CubicRBFInterpolant, x) -> float:
    return float(model.predict(np.asarray(x, dtype=float).reshape(1, -1))[0])


def predict_batch(model: CubicRBFInterpolant, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        return np.empty(0)
    return model.predict(X)
