"""Dense linear algebra substrate: rank decisions, pseudoinverses, PSD square
roots, subspaces, reduced (Douglas) solutions and A-seminorms.

Every matrix is carried as a complex128 ``numpy.ndarray``.  Rank is decided once
per factorization with a single relative singular-value cutoff, and everything
downstream inherits that decision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._validation import InputError, PreconditionError, as_matrix, as_vector

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "Subspace",
    "PsdOperator",
    "BlockDecomposition",
    "RankFactorization",
    "rank_factorization",
    "pseudo_inverse",
    "psd_sqrt",
    "column_space",
    "null_space",
    "orthogonal_projector",
    "subspace_intersection",
    "subspace_ominus",
    "subspaces_equal",
    "reduced_solution",
    "block_decompose",
    "assemble_from_blocks",
    "seminorm",
    "as_psd",
    "near_zero",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds shared by every operation.

    ``rank_rel_tol`` keeps singular values ``s > rank_rel_tol * s_max``.
    ``residual_tol`` declares ``X ~ 0`` when
    ``||X||_F <= residual_tol * (1 + scale)``.
    """

    rank_rel_tol: float = 1e-10
    residual_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel_tol", "residual_tol"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise InputError(f"{name} must lie in (0, 1), got {v!r}")

    def bound(self, *scales: float) -> float:
        return self.residual_tol * (1.0 + float(sum(scales)))


DEFAULT_TOL = ToleranceConfig()


def _tol(tol: ToleranceConfig | None) -> ToleranceConfig:
    return DEFAULT_TOL if tol is None else tol


def fro(X) -> float:
    return float(np.linalg.norm(X)) if np.size(X) else 0.0


def near_zero(X, tol: ToleranceConfig | None = None, *scales: float) -> tuple[bool, float]:
    """Return ``(is_zero, residual)`` for the relative residual predicate."""
    r = fro(X)
    return r <= _tol(tol).bound(*scales), r


# --------------------------------------------------------------------------
# factorizations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RankFactorization:
    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray
    rank: int
    # full right singular basis; columns rank: span the nullspace
    right_full: np.ndarray = field(repr=False)
    left_full: np.ndarray = field(repr=False)


def rank_factorization(M, tol: ToleranceConfig | None = None,
                       ref_scale: float | None = None) -> RankFactorization:
    """Truncated SVD ``M ~ left @ diag(s) @ right^H``.

    ``ref_scale`` replaces the largest singular value as the reference for the
    relative cutoff; pass the norm of the operator ``M`` was derived from when
    ``M`` may be pure roundoff.
    """
    tol = _tol(tol)
    M = as_matrix(M)
    m, n = M.shape
    if m == 0 or n == 0:
        return RankFactorization(
            np.zeros((m, 0), complex), np.zeros(0), np.zeros((n, 0), complex), 0,
            np.eye(n, dtype=complex), np.eye(m, dtype=complex))
    U, s, Vh = np.linalg.svd(M, full_matrices=True)
    ref = s[0] if ref_scale is None else max(float(ref_scale), s[0])
    r = int(np.count_nonzero(s > tol.rank_rel_tol * ref)) if ref > 0 else 0
    V = Vh.conj().T
    return RankFactorization(U[:, :r], s[:r].copy(), V[:, :r], r, V, U)


def pseudo_inverse(M, tol: ToleranceConfig | None = None,
                   ref_scale: float | None = None) -> np.ndarray:
    """Moore-Penrose inverse through the truncated SVD."""
    f = rank_factorization(M, tol, ref_scale)
    return (f.right / f.singular_values) @ f.left.conj().T


# --------------------------------------------------------------------------
# subspaces
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of ``C^n`` held by an orthonormal column basis."""

    basis: np.ndarray

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=complex)
        if B.ndim != 2:
            raise InputError("subspace basis must be two-dimensional")
        k = B.shape[1]
        if k > B.shape[0]:
            raise InputError("subspace basis has more columns than rows")
        if k and not np.allclose(B.conj().T @ B, np.eye(k), atol=1e-8):
            raise InputError("subspace basis is not orthonormal")
        object.__setattr__(self, "basis", B)

    @classmethod
    def span(cls, M, tol: ToleranceConfig | None = None) -> "Subspace":
        """Column space of an arbitrary matrix (re-orthonormalized)."""
        return column_space(M, tol)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((n, 0), complex))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n, dtype=complex))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def complement(self) -> "Subspace":
        n, k = self.basis.shape
        if k == 0:
            return Subspace.full(n)
        if k == n:
            return Subspace.zero(n)
        Q, _ = np.linalg.qr(self.basis, mode="complete")
        return Subspace(Q[:, k:])

    def contains(self, v, tol: ToleranceConfig | None = None) -> bool:
        v = as_matrix(v) if np.ndim(v) == 2 else as_vector(v)[:, None]
        ok, _ = near_zero(v - self.projector @ v, tol, fro(v))
        return ok

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def column_space(M, tol: ToleranceConfig | None = None,
                 ref_scale: float | None = None) -> Subspace:
    return Subspace(rank_factorization(M, tol, ref_scale).left)


def null_space(M, tol: ToleranceConfig | None = None,
               ref_scale: float | None = None) -> Subspace:
    f = rank_factorization(M, tol, ref_scale)
    return Subspace(f.right_full[:, f.rank:])


def orthogonal_projector(S: Subspace) -> np.ndarray:
    return S.projector


def _check_same_ambient(*spaces: Subspace):
    dims = {S.ambient_dim for S in spaces}
    if len(dims) > 1:
        raise InputError(f"subspaces live in different ambient dimensions {sorted(dims)}")


def subspace_intersection(M1: Subspace, M2: Subspace,
                          tol: ToleranceConfig | None = None) -> Subspace:
    """``M1 & M2``: coordinates ``c`` with ``(I - P_M2) U1 c = 0``."""
    _check_same_ambient(M1, M2)
    n = M1.ambient_dim
    if M1.dim == 0 or M2.dim == 0:
        return Subspace.zero(n)
    U1 = M1.basis
    K = null_space(U1 - M2.projector @ U1, tol, ref_scale=1.0)
    return Subspace(U1 @ K.basis)


def subspace_ominus(M1: Subspace, M2: Subspace,
                    tol: ToleranceConfig | None = None) -> Subspace:
    """``M1 (-) M2 = M1 & (M1 & M2)^perp``."""
    inter = subspace_intersection(M1, M2, tol)
    if inter.dim == 0:
        return M1
    U1 = M1.basis
    K = null_space(inter.basis.conj().T @ U1, tol, ref_scale=1.0)
    return Subspace(U1 @ K.basis)


def subspaces_equal(S1: Subspace, S2: Subspace, atol: float = 1e-7) -> bool:
    """Basis-independent equality through the projector difference."""
    _check_same_ambient(S1, S2)
    return S1.dim == S2.dim and fro(S1.projector - S2.projector) <= atol


# --------------------------------------------------------------------------
# PSD operators
# --------------------------------------------------------------------------


class PsdOperator:
    """Hermitian positive semidefinite weight with a cached eigendecomposition.

    Eigenvalues at or below ``rank_rel_tol * lambda_max`` are treated as exact
    zeros, so the square root, range and kernel all agree on a single rank.
    Eigenvalues below ``-residual_tol * lambda_max`` are rejected.
    """

    def __init__(self, mat, tol: ToleranceConfig | None = None):
        tol = _tol(tol)
        M = as_matrix(mat)
        if M.shape[0] != M.shape[1]:
            raise InputError(f"PSD operator must be square, got shape {M.shape}")
        asym = fro(M - M.conj().T)
        if asym > tol.bound(fro(M)):
            raise InputError(f"operator is not Hermitian (residual {asym:.3g})")
        M = (M + M.conj().T) / 2
        w, V = np.linalg.eigh(M) if M.size else (np.zeros(0), np.zeros((0, 0), complex))
        wmax = float(np.max(np.abs(w))) if w.size else 0.0
        if w.size and w[0] < -tol.residual_tol * wmax:
            raise InputError(f"operator is not positive semidefinite "
                             f"(smallest eigenvalue {w[0]:.3g})")
        keep = w > tol.rank_rel_tol * wmax if wmax > 0 else np.zeros_like(w, bool)
        self.mat = M
        self.tol = tol
        self.eigvals = np.where(keep, w, 0.0)
        self.eigvecs = V
        self._keep = keep
        self.rank = int(np.count_nonzero(keep))

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    @cached_property
    def norm(self) -> float:
        return float(np.max(self.eigvals)) if self.eigvals.size else 0.0

    @cached_property
    def sqrt(self) -> np.ndarray:
        V = self.eigvecs
        return (V * np.sqrt(self.eigvals)) @ V.conj().T

    @cached_property
    def sqrt_pinv(self) -> np.ndarray:
        V = self.eigvecs[:, self._keep]
        return (V / np.sqrt(self.eigvals[self._keep])) @ V.conj().T

    @cached_property
    def range_space(self) -> Subspace:
        return Subspace(self.eigvecs[:, self._keep])

    @cached_property
    def kernel(self) -> Subspace:
        return Subspace(self.eigvecs[:, ~self._keep])

    @property
    def invertible(self) -> bool:
        return self.rank == self.n

    def __repr__(self):
        return f"PsdOperator(n={self.n}, rank={self.rank})"


def as_psd(A, tol: ToleranceConfig | None = None) -> PsdOperator:
    if isinstance(A, PsdOperator):
        return A
    return PsdOperator(A, tol)


def psd_sqrt(A, tol: ToleranceConfig | None = None) -> np.ndarray:
    """Hermitian PSD square root ``R`` with ``R @ R ~ A``."""
    return as_psd(A, tol).sqrt


# --------------------------------------------------------------------------
# Douglas reduced solution
# --------------------------------------------------------------------------


def reduced_solution(A, B, tol: ToleranceConfig | None = None,
                     ref_scale: float | None = None) -> np.ndarray:
    """Unique ``D`` with ``A D = B`` and ``R(D)`` inside ``R(A^H)``.

    Raises
    ------
    PreconditionError
        If ``R(B)`` is not contained in ``R(A)``.
    """
    tol = _tol(tol)
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape[0] != B.shape[0]:
        raise InputError(f"row mismatch: A is {A.shape}, B is {B.shape}")
    Ad = pseudo_inverse(A, tol, ref_scale)
    D = Ad @ B
    ok, r = near_zero(A @ D - B, tol, fro(A) * fro(D), fro(B))
    if not ok:
        raise PreconditionError(f"no solution: range condition fails (residual {r:.3g})")
    return D


# --------------------------------------------------------------------------
# block decomposition
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """Blocks ``a, b, c`` of an operator in the ``(S, S^perp)`` splitting."""

    subspace: Subspace
    complement: Subspace
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    @property
    def frame(self) -> np.ndarray:
        """Unitary ``[U W]`` whose columns are the S basis then the S^perp basis."""
        return np.hstack([self.subspace.basis, self.complement.basis])

    def range_condition_residual(self) -> float:
        """Residual of ``R(b)`` inside ``R(a^{1/2})``."""
        if self.a.size == 0 or self.b.size == 0:
            return 0.0
        P = PsdOperator(self.a).range_space.projector
        return fro(self.b - P @ self.b)


def block_decompose(A, S: Subspace) -> BlockDecomposition:
    A = as_psd(A)
    if A.n != S.ambient_dim:
        raise InputError(f"operator is {A.n}x{A.n} but subspace lives in C^{S.ambient_dim}")
    U = S.basis
    W = S.complement().basis
    M = A.mat
    return BlockDecomposition(S, Subspace(W), U.conj().T @ M @ U,
                              U.conj().T @ M @ W, W.conj().T @ M @ W)


def assemble_from_blocks(dec: BlockDecomposition) -> np.ndarray:
    F = dec.frame
    blk = np.block([[dec.a, dec.b], [dec.b.conj().T, dec.c]])
    return F @ blk @ F.conj().T


# --------------------------------------------------------------------------
# seminorm
# --------------------------------------------------------------------------


def seminorm(A, x, tol: ToleranceConfig | None = None) -> float:
    """``||x||_A = <Ax, x>^{1/2}``, evaluated as ``||A^{1/2} x||``."""
    A = as_psd(A, tol)
    x = as_vector(x)
    if x.shape[0] != A.n:
        raise InputError(f"vector has length {x.shape[0]}, operator is {A.n}x{A.n}")
    q = np.vdot(x, A.mat @ x).real
    if q < -A.tol.residual_tol * (1 + A.norm * float(np.vdot(x, x).real)):
        raise InputError(f"negative quadratic form {q:.3g}: weight is not PSD")
    return float(np.linalg.norm(A.sqrt @ x))
