"""Input coercion and the exception types raised across the package."""

import numpy as np


class InputError(ValueError):
    """Malformed input: bad shape, non-finite entries, non-PSD weight."""


class PreconditionError(ValueError):
    """Well-formed input that violates an operation's precondition."""


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite two-dimensional complex array (copy)."""
    if hasattr(M, "mat"):
        M = M.mat
    try:
        X = np.array(M, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} is not numeric: {exc}") from None
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise InputError(f"{name} must be two-dimensional, got ndim={X.ndim}")
    if not np.all(np.isfinite(X)):
        raise InputError(f"{name} has non-finite entries")
    return X


def as_vector(x, name: str = "vector") -> np.ndarray:
    X = np.array(x, dtype=complex)
    if X.ndim == 2 and 1 in X.shape:
        X = X.ravel()
    if X.ndim != 1:
        raise InputError(f"{name} must be a vector, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InputError(f"{name} has non-finite entries")
    return X


def as_square(M, name: str = "matrix") -> np.ndarray:
    X = as_matrix(M, name)
    if X.shape[0] != X.shape[1]:
        raise InputError(f"{name} must be square, got shape {X.shape}")
    return X


def check_dims(n: int, **mats):
    """Raise unless every named matrix is ``n x n``."""
    for name, M in mats.items():
        if M is None:
            continue
        shape = np.shape(M)
        if shape != (n, n):
            raise InputError(f"{name} has shape {shape}, expected ({n}, {n})")
