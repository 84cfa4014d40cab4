"""scikit-learn compatible wrappers.

``SeminormProjector`` learns a subspace from sample rows and maps new rows
through ``P_{A,S}``; ``SeminormLeastSquares`` fits a linear model whose
residual is measured in a PSD seminorm over the samples.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import InputError, as_matrix, as_vector
from .numkernel import PsdOperator, ToleranceConfig, column_space
from .projections import distinguished_projection, kernel_intersection
from .winverse import a1a2_inverse, a_inverse_family


def _weight(weight, n, what):
    if weight is None:
        return PsdOperator(np.eye(n))
    W = PsdOperator(weight)
    if W.n != n:
        raise InputError(f"{what} is {W.n}x{W.n}, expected {n}x{n}")
    return W


def _maybe_real(X, like):
    if not np.iscomplexobj(like) and np.allclose(X.imag, 0.0):
        return X.real
    return X


class SeminormProjector(TransformerMixin, BaseEstimator):
    """Project feature vectors onto the span of the training rows.

    Parameters
    ----------
    weight : array of shape (n_features, n_features), optional
        PSD weight defining the seminorm; identity when omitted, in which case
        the projection is orthogonal.
    rank_tol, residual_tol : float
        Numerical cutoffs, see :class:`~weightedproj.numkernel.ToleranceConfig`.

    Attributes
    ----------
    projection_ : ndarray of shape (n_features, n_features)
    subspace_ : Subspace
    degenerate_space_ : Subspace
        Directions of the subspace that the weight cannot see.
    """

    def __init__(self, weight=None, rank_tol=1e-10, residual_tol=1e-8):
        self.weight = weight
        self.rank_tol = rank_tol
        self.residual_tol = residual_tol

    def fit(self, X, y=None):
        X = as_matrix(X, "X")
        tol = ToleranceConfig(self.rank_tol, self.residual_tol)
        n = X.shape[1]
        A = _weight(self.weight, n, "weight")
        self.subspace_ = column_space(X.T, tol)
        self.projection_ = distinguished_projection(A, self.subspace_, tol)
        self.degenerate_space_ = kernel_intersection(A, self.subspace_, tol)
        self.n_features_in_ = n
        return self

    def transform(self, X):
        check_is_fitted(self, "projection_")
        Z = as_matrix(X, "X")
        if Z.shape[1] != self.n_features_in_:
            raise InputError(f"X has {Z.shape[1]} features, expected {self.n_features_in_}")
        return _maybe_real(Z @ self.projection_.T, X)


class SeminormLeastSquares(RegressorMixin, BaseEstimator):
    """Linear least squares with a PSD seminorm on the residual.

    ``coef_`` minimizes ``||y - X c||_W`` where ``W = sample_weight_matrix``.
    Among the minimizers it has minimum ``coef_weight``-seminorm, or minimum
    Euclidean norm when ``coef_weight`` is omitted.
    """

    def __init__(self, sample_weight_matrix=None, coef_weight=None,
                 rank_tol=1e-10, residual_tol=1e-8):
        self.sample_weight_matrix = sample_weight_matrix
        self.coef_weight = coef_weight
        self.rank_tol = rank_tol
        self.residual_tol = residual_tol

    def fit(self, X, y):
        X = as_matrix(X, "X")
        yv = as_vector(y, "y")
        m, p = X.shape
        if yv.shape[0] != m:
            raise InputError(f"X has {m} rows but y has {yv.shape[0]} entries")
        tol = ToleranceConfig(self.rank_tol, self.residual_tol)
        W = _weight(self.sample_weight_matrix, m, "sample_weight_matrix")
        # pad the design to a square operator on C^max(m, p)
        k = max(m, p)
        B = np.zeros((k, k), complex)
        B[:m, :p] = X
        W1 = np.zeros((k, k), complex)
        W1[:m, :m] = W.mat
        yk = np.zeros(k, complex)
        yk[:m] = yv
        if self.coef_weight is None:
            G = a_inverse_family(W1, B, tol).base
        else:
            W2 = np.zeros((k, k), complex)
            W2[:p, :p] = _weight(self.coef_weight, p, "coef_weight").mat
            G = a1a2_inverse(W1, W2, B, tol)
        self.coef_ = _maybe_real((G @ yk)[:p], y)
        self.n_features_in_ = p
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        Xm = as_matrix(X, "X")
        if Xm.shape[1] != self.n_features_in_:
            raise InputError(f"X has {Xm.shape[1]} features, expected {self.n_features_in_}")
        return _maybe_real(Xm @ self.coef_, X)
