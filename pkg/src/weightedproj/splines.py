"""Abstract spline interpolants: minimizers of ``||C y||`` over ``y in x + S``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import InputError, as_matrix, as_vector
from .numkernel import (
    PsdOperator,
    Subspace,
    ToleranceConfig,
    _tol,
    fro,
    near_zero,
)
from .projections import distinguished_projection, kernel_intersection

__all__ = ["AffineVectorFamily", "spline_set", "weighted_distance", "gram_weight"]


@dataclass(frozen=True, eq=False)
class AffineVectorFamily:
    """``representative + direction_space``."""

    representative: np.ndarray
    direction_space: Subspace

    def member(self, coeffs) -> np.ndarray:
        c = np.asarray(coeffs, dtype=complex).reshape(self.direction_space.dim)
        return self.representative + self.direction_space.basis @ c

    def sample(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        k = self.direction_space.dim
        return self.member(scale * (rng.standard_normal(k) + 1j * rng.standard_normal(k)))

    def contains(self, y, tol: ToleranceConfig | None = None) -> bool:
        r = as_vector(y) - self.representative
        ok, _ = near_zero(r - self.direction_space.projector @ r, tol,
                          fro(y) + fro(self.representative))
        return ok


def gram_weight(C, tol: ToleranceConfig | None = None) -> PsdOperator:
    """``A = C^H C``, so that ``||y||_A = ||C y||``."""
    C = as_matrix(C, "C")
    return PsdOperator(C.conj().T @ C, tol)


def _inputs(C, S: Subspace, x, tol):
    tol = _tol(tol)
    A = gram_weight(C, tol)
    x = as_vector(x, "x")
    if A.n != S.ambient_dim or x.shape[0] != A.n:
        raise InputError(f"C has {A.n} columns, S lives in C^{S.ambient_dim}, "
                         f"x has length {x.shape[0]}")
    return A, x, tol


def spline_set(C, S: Subspace, x, tol: ToleranceConfig | None = None) -> AffineVectorFamily:
    """``sp(C, S, x) = {(I - T) x : T in Pi(C^H C, S)}``.

    The set is ``(I - P_{A,S}) x + N`` with ``N = S & N(A)``; for ``x = 0`` it
    reduces to ``N`` itself.
    """
    A, x, tol = _inputs(C, S, x, tol)
    N = kernel_intersection(A, S, tol)
    if not np.any(x):
        return AffineVectorFamily(np.zeros(A.n, complex), N)
    P = distinguished_projection(A, S, tol)
    return AffineVectorFamily(x - P @ x, N)


def spline_membership(C, S: Subspace, x, y, tol: ToleranceConfig | None = None) -> tuple[float, float]:
    """Residuals of ``y`` in ``x + S`` and of ``y`` in ``A(S)^perp``."""
    A, x, tol = _inputs(C, S, x, tol)
    y = as_vector(y, "y")
    d = y - x
    r_coset = fro(d - S.projector @ d)
    r_perp = fro(S.basis.conj().T @ (A.mat @ y))
    return r_coset, r_perp


def weighted_distance(C, S: Subspace, x, tol: ToleranceConfig | None = None) -> float:
    """``d_A(x, S) = inf over s in S of ||x - s||_A = ||(I - P_{A,S}) x||_A``."""
    A, x, tol = _inputs(C, S, x, tol)
    P = distinguished_projection(A, S, tol)
    C = as_matrix(C)
    return float(np.linalg.norm(C @ (x - P @ x)))
