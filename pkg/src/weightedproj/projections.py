"""Projections that are orthogonal for the seminorm of a PSD weight ``A``.

Two families of operators with range in a subspace ``S`` are modelled:

* ``P(A, S)``: idempotents with range exactly ``S`` that are A-selfadjoint;
* ``Pi(A, S)``: A-projections into ``S``, i.e. ``T`` with ``R(T)`` in ``S``
  and ``||y - Ty||_A <= ||y - s||_A`` for every ``y`` and ``s`` in ``S``.

Both are affine and share the distinguished element ``P_{A,S}``.  Their free
part is governed by ``N = S & N(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._validation import InputError, PreconditionError, as_square, as_vector
from .numkernel import (
    PsdOperator,
    Subspace,
    ToleranceConfig,
    _tol,
    as_psd,
    block_decompose,
    column_space,
    fro,
    near_zero,
    null_space,
    pseudo_inverse,
    subspace_ominus,
)

__all__ = [
    "AffineOperatorFamily",
    "CheckReport",
    "Compatibility",
    "kernel_intersection",
    "compatibility_certificate",
    "distinguished_projection",
    "invertible_case_projection",
    "projection_family",
    "weighted_projection_family",
    "projection_from_block",
    "check_projection_member",
    "check_weighted_projection_member",
    "check_block_form",
    "check_decomposition_member",
    "classify_operator",
    "minimality_report",
]


@dataclass
class CheckReport:
    """Named pass/fail flags, the residual behind each, and derived values."""

    flags: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, residual: float | None = None):
        self.flags[name] = bool(ok)
        if residual is not None:
            self.residuals[name] = float(residual)

    def __getitem__(self, name: str) -> bool:
        return self.flags[name]

    def __contains__(self, name: str) -> bool:
        return name in self.flags

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def failing(self) -> list[str]:
        return [k for k, v in self.flags.items() if not v]

    def to_dict(self) -> dict:
        return {"flags": dict(self.flags), "residuals": dict(self.residuals),
                "values": dict(self.values)}


@dataclass(frozen=True, eq=False)
class AffineOperatorFamily:
    """``base + {W : R(W) in range_space, W = 0 on domain_space^perp}``."""

    base: np.ndarray
    range_space: Subspace
    domain_space: Subspace
    tol: ToleranceConfig = field(default_factory=ToleranceConfig)

    @property
    def param_dims(self) -> tuple[int, int]:
        return (self.range_space.dim, self.domain_space.dim)

    @property
    def is_singleton(self) -> bool:
        return self.range_space.dim == 0 or self.domain_space.dim == 0

    def member(self, params) -> np.ndarray:
        """Member for a ``dim(range) x dim(domain)`` coefficient block."""
        Z = np.asarray(params, dtype=complex).reshape(self.param_dims)
        return self.base + self.range_space.basis @ Z @ self.domain_space.basis.conj().T

    def sample(self, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
        shape = self.param_dims
        Z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        return self.member(scale * Z)

    def residuals(self, T) -> tuple[float, float]:
        D = as_square(T) - self.base
        n = D.shape[0]
        r_range = fro((np.eye(n) - self.range_space.projector) @ D)
        r_domain = fro(D @ (np.eye(n) - self.domain_space.projector))
        return r_range, r_domain

    def contains(self, T) -> bool:
        scale = fro(self.base) + fro(T)
        return all(r <= self.tol.bound(scale) for r in self.residuals(T))


@dataclass(frozen=True, eq=False)
class Compatibility:
    compatible: bool
    residual: float
    degenerate: Subspace  # N = S & N(A)


def _setup(A, S: Subspace, tol):
    tol = _tol(tol)
    A = as_psd(A, tol)
    if A.n != S.ambient_dim:
        raise InputError(f"weight is {A.n}x{A.n} but subspace lives in C^{S.ambient_dim}")
    return A, tol


def kernel_intersection(A, S: Subspace, tol: ToleranceConfig | None = None) -> Subspace:
    """``N = S & N(A)``, read off from the kernel of the compressed block ``a``.

    Using ``a = U^H A U`` (cutoff relative to ``||A||``) keeps this rank
    decision identical to the one made when solving ``a d = b``.
    """
    A, tol = _setup(A, S, tol)
    if S.dim == 0:
        return Subspace.zero(A.n)
    U = S.basis
    a = U.conj().T @ A.mat @ U
    K = null_space(a, tol, ref_scale=A.norm)
    return Subspace(U @ K.basis)


def compatibility_certificate(A, S: Subspace, tol: ToleranceConfig | None = None) -> Compatibility:
    """Certify ``R(b)`` inside ``R(a)`` through the reduced solution of ``a x = b``.

    At finite dimension every pair is compatible; the residual measures how
    well the computed solution reproduces ``b``.
    """
    A, tol = _setup(A, S, tol)
    dec = block_decompose(A, S)
    d = pseudo_inverse(dec.a, tol, ref_scale=A.norm) @ dec.b
    ok, r = near_zero(dec.a @ d - dec.b, tol, fro(dec.a) * fro(d), fro(dec.b))
    return Compatibility(ok, r, kernel_intersection(A, S, tol))


def _reduced_block(A: PsdOperator, S: Subspace, tol: ToleranceConfig):
    dec = block_decompose(A, S)
    d = pseudo_inverse(dec.a, tol, ref_scale=A.norm) @ dec.b
    ok, r = near_zero(dec.a @ d - dec.b, tol, fro(dec.a) * fro(d), fro(dec.b))
    if not ok:
        raise PreconditionError(f"no solution: range condition fails (residual {r:.3g})")
    return dec, d


def projection_from_block(dec, x) -> np.ndarray:
    """Assemble ``[[1, x], [0, 0]]`` in the ``(S, S^perp)`` frame."""
    U = dec.subspace.basis
    W = dec.complement.basis
    return U @ U.conj().T + U @ np.asarray(x, dtype=complex) @ W.conj().T


def distinguished_projection(A, S: Subspace, tol: ToleranceConfig | None = None) -> np.ndarray:
    """``P_{A,S}``: the projection onto ``S`` with kernel ``A(S)^perp (-) N``.

    Built as ``[[1, d], [0, 0]]`` where ``d`` is the reduced solution of
    ``a x = b`` for the blocks of ``A`` relative to ``S``.
    """
    A, tol = _setup(A, S, tol)
    dec, d = _reduced_block(A, S, tol)
    return projection_from_block(dec, d)


def invertible_case_projection(A, S: Subspace, tol: ToleranceConfig | None = None) -> np.ndarray:
    """``A^{-1/2} P_{A^{1/2} S} A^{1/2}``; requires an invertible weight."""
    A, tol = _setup(A, S, tol)
    if not A.invertible:
        raise PreconditionError(f"weight is singular (rank {A.rank} < {A.n})")
    R = A.sqrt
    image = column_space(R @ S.basis, tol)
    return A.sqrt_pinv @ image.projector @ R


def projection_family(A, S: Subspace, tol: ToleranceConfig | None = None) -> AffineOperatorFamily:
    """``P(A, S) = P_{A,S} + {W : R(W) in N, W = 0 on S}``."""
    A, tol = _setup(A, S, tol)
    P = distinguished_projection(A, S, tol)
    return AffineOperatorFamily(P, kernel_intersection(A, S, tol), S.complement(), tol)


def weighted_projection_family(A, S: Subspace, tol: ToleranceConfig | None = None) -> AffineOperatorFamily:
    """``Pi(A, S) = P_{A,S} + L(H, N)``."""
    A, tol = _setup(A, S, tol)
    P = distinguished_projection(A, S, tol)
    return AffineOperatorFamily(P, kernel_intersection(A, S, tol), Subspace.full(A.n), tol)


def _operator(T, n: int) -> np.ndarray:
    T = as_square(T, "T")
    if T.shape[0] != n:
        raise InputError(f"T is {T.shape[0]}x{T.shape[0]}, weight is {n}x{n}")
    return T


def check_projection_member(A, S: Subspace, Q, tol: ToleranceConfig | None = None) -> CheckReport:
    """Membership in ``P(A, S)`` through its defining equations."""
    A, tol = _setup(A, S, tol)
    Q = _operator(Q, A.n)
    nA, nQ = fro(A.mat), fro(Q)
    rep = CheckReport()
    rep.add("idempotent", *near_zero(Q @ Q - Q, tol, nQ * nQ + nQ))
    rep.add("range_in_S", *near_zero(Q - S.projector @ Q, tol, nQ))
    rep.add("onto_S", *near_zero(Q @ S.basis - S.basis, tol, nQ))
    rep.add("a_selfadjoint", *near_zero(A.mat @ Q - Q.conj().T @ A.mat, tol, 2 * nA * nQ))
    return rep


def check_weighted_projection_member(A, S: Subspace, T, tol: ToleranceConfig | None = None) -> CheckReport:
    """Membership in ``Pi(A, S)``: ``R(T)`` in ``S`` and ``P_S A T = P_S A``."""
    A, tol = _setup(A, S, tol)
    T = _operator(T, A.n)
    nA, nT = fro(A.mat), fro(T)
    PA = S.projector @ A.mat
    rep = CheckReport()
    rep.add("range_in_S", *near_zero(T - S.projector @ T, tol, nT))
    rep.add("normal_equation", *near_zero(PA @ T - PA, tol, nA * nT + nA))
    return rep


def check_block_form(A, S: Subspace, T, tol: ToleranceConfig | None = None) -> CheckReport:
    """Membership in ``Pi(A, S)`` via ``T = [[x, y], [0, 0]]``, ``a x = a``, ``a y = b``."""
    A, tol = _setup(A, S, tol)
    T = _operator(T, A.n)
    dec = block_decompose(A, S)
    U, W = dec.subspace.basis, dec.complement.basis
    x = U.conj().T @ T @ U
    y = U.conj().T @ T @ W
    lower = W.conj().T @ T
    nT, na = fro(T), fro(dec.a)
    rep = CheckReport()
    rep.add("lower_blocks_zero", *near_zero(lower, tol, nT))
    rep.add("ax_eq_a", *near_zero(dec.a @ x - dec.a, tol, na * nT + na))
    rep.add("ay_eq_b", *near_zero(dec.a @ y - dec.b, tol, na * nT + fro(dec.b)))
    return rep


def check_decomposition_member(A, S: Subspace, T, tol: ToleranceConfig | None = None) -> CheckReport:
    """Membership in ``Pi(A, S)`` via ``P_{S(-)N} T = P_{A, S(-)N}``."""
    A, tol = _setup(A, S, tol)
    T = _operator(T, A.n)
    N = kernel_intersection(A, S, tol)
    S0 = subspace_ominus(S, N, tol)
    P0 = distinguished_projection(A, S0, tol)
    nT = fro(T)
    rep = CheckReport()
    rep.add("range_in_S", *near_zero(T - S.projector @ T, tol, nT))
    rep.add("reduced_part", *near_zero(S0.projector @ T - P0, tol, nT + fro(P0)))
    return rep


def a_operator_seminorm(A: PsdOperator, T: np.ndarray, tol: ToleranceConfig) -> float:
    """``sup{||Tx||_A : ||x||_A <= 1}``.

    Infinite when ``T`` carries some vector of ``N(A)`` outside ``N(A)``;
    zero when ``A = 0``.
    """
    if A.rank == 0:
        return 0.0
    R = A.sqrt
    K = A.kernel.projector
    leak = fro(R @ T @ K)
    if leak > tol.bound(np.sqrt(A.norm) * fro(T)):
        return float("inf")
    return float(np.linalg.norm(R @ T @ A.sqrt_pinv, 2))


def classify_operator(A, T, S: Subspace | None = None,
                      tol: ToleranceConfig | None = None) -> CheckReport:
    """Evaluate the A-projection predicates for a square operator ``T``.

    The A-projection property is computed along three independent routes
    (``T^H A T = A T``; A-selfadjoint and A-idempotent; ``P_{R(A)} T``
    idempotent and A-selfadjoint) and ``routes_agree`` records whether they
    coincide.
    """
    tol = _tol(tol)
    A = as_psd(A, tol)
    T = _operator(T, A.n)
    n = A.n
    M = A.mat
    nA, nT = fro(M), fro(T)
    AT = M @ T
    TH = T.conj().T
    rep = CheckReport()

    rep.add("a_selfadjoint", *near_zero(AT - TH @ M, tol, 2 * nA * nT))
    rep.add("a_idempotent", *near_zero(AT @ T - AT, tol, nA * nT * nT + nA * nT))

    ok1, r1 = near_zero(TH @ AT - AT, tol, nA * nT * nT + nA * nT)
    ok2 = rep["a_selfadjoint"] and rep["a_idempotent"]
    PT = A.range_space.projector @ T
    nPT = fro(PT)
    ok3a, r3a = near_zero(PT @ PT - PT, tol, nPT * nPT + nPT)
    ok3b, r3b = near_zero(M @ PT - PT.conj().T @ M, tol, 2 * nA * nPT)
    rep.add("a_projection", ok1, r1)
    rep.add("a_projection_route2", ok2)
    rep.add("a_projection_route3", ok3a and ok3b, max(r3a, r3b))
    rep.add("routes_agree", ok1 == ok2 == (ok3a and ok3b))

    if S is not None:
        if S.ambient_dim != n:
            raise InputError(f"subspace lives in C^{S.ambient_dim}, T is {n}x{n}")
        PA = S.projector @ M
        ok_r, r_r = near_zero(T - S.projector @ T, tol, nT)
        ok_n, r_n = near_zero(PA @ T - PA, tol, nA * nT + nA)
        rep.add("range_in_S", ok_r, r_r)
        rep.add("a_projection_into_S", ok_r and ok_n, r_n)

    C = M - TH @ AT
    lam = float(np.linalg.eigvalsh((C + C.conj().T) / 2)[0]) if n else 0.0
    rep.add("a_contraction", lam >= -tol.bound(nA * (1 + nT * nT)), max(0.0, -lam))
    rep.add("range_orthogonal", *near_zero(AT.conj().T @ (np.eye(n) - T), tol, nA * nT * (1 + nT)))

    ok_h, r_h = near_zero(AT - AT.conj().T, tol, 2 * nA * nT)
    H = (AT + AT.conj().T) / 2
    mu = float(np.linalg.eigvalsh(H)[0]) if n else 0.0
    rep.add("a_positive", ok_h and mu >= -tol.bound(nA * nT), max(r_h, -mu, 0.0))

    s = a_operator_seminorm(A, T, tol)
    rep.values["seminorm_of_T"] = s
    rep.add("a_norm_one", abs(s - 1.0) <= tol.bound(nT), abs(s - 1.0) if np.isfinite(s) else None)
    return rep


@dataclass(frozen=True)
class MinimalityReport:
    norm_gap: float
    pointwise_gap: float | None


def minimality_report(A, S: Subspace, T, x=None,
                      tol: ToleranceConfig | None = None) -> MinimalityReport:
    """Compare ``T`` in ``Pi(A, S)`` with ``P_{A,S}``.

    ``norm_gap = ||T|| - ||P_{A,S}||`` and
    ``pointwise_gap = ||(I - T)x|| - ||(I - P_{A,S})x||``; both are
    nonnegative up to roundoff.
    """
    A, tol = _setup(A, S, tol)
    T = _operator(T, A.n)
    member = check_weighted_projection_member(A, S, T, tol)
    if not member.passed:
        raise PreconditionError(f"T is not an A-projection into S (failing: {member.failing()})")
    P = distinguished_projection(A, S, tol)
    gap = float(np.linalg.norm(T, 2) - np.linalg.norm(P, 2))
    pgap = None
    if x is not None:
        x = as_vector(x)
        I = np.eye(A.n)
        pgap = float(np.linalg.norm((I - T) @ x) - np.linalg.norm((I - P) @ x))
    return MinimalityReport(gap, pgap)
