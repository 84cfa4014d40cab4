"""Weighted least squares and weighted generalized inverses.

``B`` is a square operator on ``C^n``; ``A``, ``A1`` and ``A2`` are PSD
weights measuring residuals (``A``, ``A1``) and solutions (``A2``).
"""

from __future__ import annotations

import enum

import numpy as np

from ._validation import InputError, as_square, as_vector
from .numkernel import (
    PsdOperator,
    Subspace,
    ToleranceConfig,
    _tol,
    as_psd,
    column_space,
    fro,
    near_zero,
    null_space,
    pseudo_inverse,
    reduced_solution,
)
from .projections import (
    AffineOperatorFamily,
    CheckReport,
    check_weighted_projection_member,
    distinguished_projection,
)

__all__ = [
    "InverseKind",
    "a_lss_solve",
    "a_inverse_family",
    "restricted_a_inverse",
    "a1a2_inverse",
    "weighted_generalized_inverse",
    "inverse_check",
    "weighted_kernel",
]


class InverseKind(str, enum.Enum):
    A_INVERSE = "a_inverse"
    RESTRICTED = "restricted"
    A1A2 = "a1a2"
    WEAK_A1A2 = "weak_a1a2"
    WGI = "wgi"
    WEAK_WGI_SYSTEM = "weak_wgi_system"


def _operands(A, B, tol):
    tol = _tol(tol)
    A = as_psd(A, tol)
    B = as_square(B, "B")
    if B.shape[0] != A.n:
        raise InputError(f"B is {B.shape[0]}x{B.shape[0]}, weight is {A.n}x{A.n}")
    return A, B, tol


def _gram(A: PsdOperator, B: np.ndarray):
    """``B^H A B`` together with the scale its rank cutoff should use."""
    return B.conj().T @ A.mat @ B, A.norm * np.linalg.norm(B, 2) ** 2


def weighted_kernel(A, B, tol: ToleranceConfig | None = None) -> Subspace:
    """``N(A B)``, computed from ``A^{1/2} B`` which has the same kernel."""
    A, B, tol = _operands(A, B, tol)
    return null_space(A.sqrt @ B, tol, ref_scale=np.sqrt(A.norm) * np.linalg.norm(B, 2))


def a_lss_solve(A, B, y, tol: ToleranceConfig | None = None) -> np.ndarray:
    """Minimal-norm solution of the normal equation ``B^H A B x = B^H A y``."""
    A, B, tol = _operands(A, B, tol)
    y = as_vector(y, "y")
    G, ref = _gram(A, B)
    return pseudo_inverse(G, tol, ref_scale=ref) @ (B.conj().T @ (A.mat @ y))


def a_inverse_family(A, B, tol: ToleranceConfig | None = None) -> AffineOperatorFamily:
    """All ``G`` with ``B^H A B G = B^H A``: ``(B^H A B)^+ B^H A + L(H, N(B^H A B))``."""
    A, B, tol = _operands(A, B, tol)
    G, ref = _gram(A, B)
    f_pinv = pseudo_inverse(G, tol, ref_scale=ref)
    base = f_pinv @ B.conj().T @ A.mat
    kernel = null_space(G, tol, ref_scale=ref)
    return AffineOperatorFamily(base, kernel, Subspace.full(A.n), tol)


def restricted_a_inverse(A, B, M: Subspace, tol: ToleranceConfig | None = None) -> np.ndarray:
    """A-inverse of ``B`` restricted to ``M``.

    Returns the reduced solution of ``B P_M X = P_{A, B(M)}``; its range lies
    in ``M``.
    """
    A, B, tol = _operands(A, B, tol)
    if M.ambient_dim != A.n:
        raise InputError(f"M lives in C^{M.ambient_dim}, B is {A.n}x{A.n}")
    BM = B @ M.projector
    scale = np.linalg.norm(B, 2)
    T = distinguished_projection(A, column_space(BM, tol, ref_scale=scale), tol)
    return reduced_solution(BM, T, tol, ref_scale=scale)


def _weighted_inverse(A1, A2, B, kernel: Subspace, tol):
    T1 = distinguished_projection(A1, column_space(B, tol), tol)
    T2 = distinguished_projection(A2, kernel, tol)
    n = B.shape[0]
    return (np.eye(n) - T2) @ pseudo_inverse(B, tol) @ T1


def a1a2_inverse(A1, A2, B, tol: ToleranceConfig | None = None) -> np.ndarray:
    """``G = (I - T2) B^+ T1`` with ``T1 = P_{A1, R(B)}``, ``T2 = P_{A2, N(A1 B)}``.

    For every ``y``, ``G y`` is the A1-least squares solution of ``Bx = y`` of
    minimum A2-seminorm.
    """
    A1, B, tol = _operands(A1, B, tol)
    A2, _, _ = _operands(A2, B, tol)
    return _weighted_inverse(A1, A2, B, weighted_kernel(A1, B, tol), tol)


def weighted_generalized_inverse(A1, A2, B, tol: ToleranceConfig | None = None) -> np.ndarray:
    """``C = (I - P_{A2, N(B)}) B^+ P_{A1, R(B)}``.

    Satisfies ``BCB = B``, ``CBC = C``, ``A1 BC = (BC)^H A1`` and
    ``A2 CB = (CB)^H A2``.
    """
    A1, B, tol = _operands(A1, B, tol)
    A2, _, _ = _operands(A2, B, tol)
    return _weighted_inverse(A1, A2, B, null_space(B, tol), tol)


# --------------------------------------------------------------------------
# checks
# --------------------------------------------------------------------------


def _hermitian_under(W, X, tol, name, rep, nW, nX):
    rep.add(name, *near_zero(W @ X - X.conj().T @ W, tol, 2 * nW * nX))


def _weak_a1a2_equations(A1, A2, B, G, tol, rep):
    M1, M2 = A1.mat, A2.mat
    n1, n2, nB, nG = fro(M1), fro(M2), fro(B), fro(G)
    BG, GB = B @ G, G @ B
    rep.add("A1BGB_eq_A1B", *near_zero(M1 @ BG @ B - M1 @ B, tol, n1 * nB * (1 + nB * nG)))
    _hermitian_under(M1, BG, tol, "A1BG_hermitian", rep, n1, nB * nG)
    rep.add("A2GBG_eq_A2G", *near_zero(M2 @ GB @ G - M2 @ G, tol, n2 * nG * (1 + nB * nG)))
    _hermitian_under(M2, GB, tol, "A2GB_hermitian", rep, n2, nB * nG)


def _three_equations(A1, A2, B, G, tol, rep):
    nB, nG = fro(B), fro(G)
    rep.add("BGB_eq_B", *near_zero(B @ G @ B - B, tol, nB * (1 + nB * nG)))
    _hermitian_under(A1.mat, B @ G, tol, "A1BG_hermitian", rep, fro(A1.mat), nB * nG)
    _hermitian_under(A2.mat, G @ B, tol, "A2GB_hermitian", rep, fro(A2.mat), nB * nG)


def _system(A1, A2, B, G, tol, rep):
    n = B.shape[0]
    T1 = check_weighted_projection_member(A1, column_space(B, tol), B @ G, tol)
    T2 = check_weighted_projection_member(A2, null_space(B, tol), np.eye(n) - G @ B, tol)
    for k in T1.flags:
        rep.add(f"BG_in_Pi_A1_RB.{k}", T1[k], T1.residuals.get(k))
    for k in T2.flags:
        rep.add(f"I-GB_in_Pi_A2_NB.{k}", T2[k], T2.residuals.get(k))
    return T1.passed and T2.passed


def inverse_check(A1, B, G, kind, A2=None, M: Subspace | None = None,
                  tol: ToleranceConfig | None = None) -> CheckReport:
    """Evaluate the defining equations of the requested kind of weighted inverse.

    For ``weak_wgi_system`` the system ``BG in Pi(A1, R(B))``,
    ``I - GB in Pi(A2, N(B))`` is evaluated together with the equivalent
    three-equation form; ``forms_agree`` records whether they coincide, and
    the report passes only when the system holds.
    """
    kind = InverseKind(kind)
    A1, B, tol = _operands(A1, B, tol)
    G = as_square(G, "G")
    if G.shape != B.shape:
        raise InputError(f"G has shape {G.shape}, B has shape {B.shape}")
    needs_a2 = kind in (InverseKind.A1A2, InverseKind.WEAK_A1A2, InverseKind.WGI,
                        InverseKind.WEAK_WGI_SYSTEM)
    if needs_a2:
        if A2 is None:
            raise InputError(f"kind {kind.value!r} needs a second weight A2")
        A2, _, _ = _operands(A2, B, tol)
    if kind is InverseKind.RESTRICTED and M is None:
        raise InputError("kind 'restricted' needs a subspace M")

    rep = CheckReport()
    M1 = A1.mat
    nA, nB, nG = fro(M1), fro(B), fro(G)
    BH = B.conj().T
    normal = BH @ M1 @ B @ G - BH @ M1
    normal_scale = nA * nB * (1 + nB * nG)

    if kind is InverseKind.A_INVERSE:
        rep.add("normal_equation", *near_zero(normal, tol, normal_scale))
    elif kind is InverseKind.RESTRICTED:
        if M.ambient_dim != B.shape[0]:
            raise InputError(f"M lives in C^{M.ambient_dim}, B is {B.shape}")
        rep.add("range_in_M", *near_zero(G - M.projector @ G, tol, nG))
        rep.add("restricted_normal_equation",
                *near_zero(M.projector @ normal, tol, normal_scale))
    elif kind is InverseKind.A1A2:
        rep.add("normal_equation", *near_zero(normal, tol, normal_scale))
        K = weighted_kernel(A1, B, tol)
        rep.add("A2G_range_perp_N_A1B",
                *near_zero(K.projector @ A2.mat @ G, tol, fro(A2.mat) * nG))
    elif kind is InverseKind.WEAK_A1A2:
        _weak_a1a2_equations(A1, A2, B, G, tol, rep)
    elif kind is InverseKind.WGI:
        rep.add("BCB_eq_B", *near_zero(B @ G @ B - B, tol, nB * (1 + nB * nG)))
        rep.add("CBC_eq_C", *near_zero(G @ B @ G - G, tol, nG * (1 + nB * nG)))
        _hermitian_under(M1, B @ G, tol, "A1BC_hermitian", rep, nA, nB * nG)
        _hermitian_under(A2.mat, G @ B, tol, "A2CB_hermitian", rep, fro(A2.mat), nB * nG)
    else:
        system_ok = _system(A1, A2, B, G, tol, rep)
        three = CheckReport()
        _three_equations(A1, A2, B, G, tol, three)
        for k in three.flags:
            rep.residuals[f"three.{k}"] = three.residuals[k]
        rep.values["system"] = float(system_ok)
        rep.values["three_equations"] = float(three.passed)
        rep.add("forms_agree", system_ok == three.passed)
    return rep
