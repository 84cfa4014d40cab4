"""Brute-force reference computations.

Everything here works in the square-root lifting ``v -> A^{1/2} v`` and never
touches the projection or weighted-inverse code, so agreement with those
modules is evidence rather than tautology.
"""

from __future__ import annotations

import numpy as np

from ._validation import as_matrix, as_vector
from .numkernel import Subspace, as_psd, fro, pseudo_inverse

__all__ = ["oracle_seminorm_lss", "oracle_min_over_affine", "dominance_sample_test"]


def oracle_seminorm_lss(A, B, y):
    """Minimize ``||A^{1/2}(y - Bx)||`` by a pseudoinverse of ``A^{1/2} B``.

    Returns ``(x_min, value)``.
    """
    R = as_psd(A).sqrt
    B = as_matrix(B, "B")
    y = as_vector(y, "y")
    x = pseudo_inverse(R @ B) @ (R @ y)
    return x, float(np.linalg.norm(R @ (y - B @ x)))


def oracle_min_over_affine(A2, base, directions: Subspace):
    """Minimize ``||base + D t||_{A2}`` over coefficient vectors ``t``."""
    R = as_psd(A2).sqrt
    base = as_vector(base, "base")
    D = directions.basis
    if D.shape[1] == 0:
        return base.copy(), float(np.linalg.norm(R @ base))
    t = -pseudo_inverse(R @ D) @ (R @ base)
    point = base + D @ t
    return point, float(np.linalg.norm(R @ point))


def dominance_sample_test(A, candidate, coset_base, coset_dirs: Subspace,
                          trials: int = 200, seed: int = 0, tol: float = 1e-8) -> bool:
    """Randomized falsifier for ``||candidate||_A <= ||p||_A`` on a coset.

    ``candidate`` must itself lie in ``coset_base + span(coset_dirs)``; coset
    points are sampled with coefficient magnitudes spread over four decades
    so that both nearby and distant competitors are tried.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    R = as_psd(A).sqrt
    cand = as_vector(candidate, "candidate")
    base = as_vector(coset_base, "coset_base")
    D = coset_dirs.basis
    off = cand - base
    if fro(off - D @ (D.conj().T @ off)) > tol * (1 + fro(cand) + fro(base)):
        return False
    value = np.linalg.norm(R @ cand)
    k = D.shape[1]
    if k == 0:
        return True
    rng = np.random.default_rng(seed)
    spread = max(1.0, fro(base))
    for _ in range(trials):
        t = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        t *= spread * 10.0 ** rng.uniform(-3, 1)
        if value > np.linalg.norm(R @ (base + D @ t)) + tol:
            return False
    return True
