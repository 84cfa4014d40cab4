"""Randomized invariant suite behind ``weightedproj verify``.

Every property draws its own instance from a generator seeded deterministically
from the root seed, the property name and the trial index, so results do not
depend on evaluation order.
"""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import testing as rnd
from .numkernel import (
    Subspace,
    ToleranceConfig,
    assemble_from_blocks,
    block_decompose,
    column_space,
    fro,
    null_space,
    pseudo_inverse,
    psd_sqrt,
    subspace_ominus,
    subspaces_equal,
)
from .oracle import dominance_sample_test, oracle_min_over_affine, oracle_seminorm_lss
from .projections import (
    check_block_form,
    check_decomposition_member,
    check_projection_member,
    check_weighted_projection_member,
    classify_operator,
    distinguished_projection,
    invertible_case_projection,
    kernel_intersection,
    projection_family,
    weighted_projection_family,
)
from .splines import spline_membership, spline_set, weighted_distance
from .winverse import (
    a1a2_inverse,
    a_inverse_family,
    a_lss_solve,
    inverse_check,
    restricted_a_inverse,
    weighted_generalized_inverse,
    weighted_kernel,
)

PROPERTIES = {}


def prop(fn):
    PROPERTIES[fn.__name__] = fn
    return fn


def _ok(cond: bool, msg: str, out: list):
    if not cond:
        out.append(msg)


@prop
def penrose_equations(rng, n, tol):
    out = []
    M = rnd.random_matrix(rng, n, int(rng.integers(1, n + 1)))
    X = pseudo_inverse(M, tol)
    s = tol.bound(fro(M))
    for name, R in [("MXM=M", M @ X @ M - M), ("XMX=X", X @ M @ X - X),
                    ("MX hermitian", M @ X - (M @ X).conj().T),
                    ("XM hermitian", X @ M - (X @ M).conj().T)]:
        _ok(fro(R) <= s * (1 + fro(X)) ** 2, name, out)
    f_dim = column_space(M, tol).dim + null_space(M, tol).dim
    _ok(f_dim == M.shape[1], "rank-nullity", out)
    return out


@prop
def psd_square_root(rng, n, tol):
    A = rnd.random_psd(rng, n)
    R = psd_sqrt(A, tol)
    out = []
    _ok(fro(R @ R - A) <= tol.bound(fro(A)), "R^2 = A", out)
    _ok(fro(R @ A - A @ R) <= tol.bound(fro(A) * fro(R)), "R commutes with A", out)
    return out


@prop
def block_round_trip(rng, n, tol):
    A = rnd.random_psd(rng, n)
    S = rnd.random_subspace(rng, n)
    dec = block_decompose(A, S)
    out = []
    _ok(fro(assemble_from_blocks(dec) - A) <= tol.bound(fro(A)), "assemble(decompose(A)) = A", out)
    _ok(dec.range_condition_residual() <= 1e-6 * (1 + fro(A)), "R(b) in R(a^1/2)", out)
    return out


@prop
def distinguished_projection_contract(rng, n, tol):
    A = rnd.random_psd(rng, n)
    S = rnd.random_subspace(rng, n)
    Q = distinguished_projection(A, S, tol)
    out = []
    b = tol.bound(fro(A))
    _ok(fro(Q @ Q - Q) <= b, "Q^2 = Q", out)
    _ok(fro(A @ Q - Q.conj().T @ A) <= b, "AQ = Q^H A", out)
    _ok(subspaces_equal(column_space(Q, tol), S), "R(Q) = S", out)
    N = kernel_intersection(A, S, tol)
    AS_perp = null_space(S.basis.conj().T @ A, tol, ref_scale=np.linalg.norm(A, 2))
    _ok(subspaces_equal(null_space(Q, tol), subspace_ominus(AS_perp, N, tol)),
        "N(Q) = A(S)^perp (-) N", out)
    S0 = subspace_ominus(S, N, tol)
    P0 = distinguished_projection(A, S0, tol)
    _ok(fro(Q - P0 - N.projector) <= 1e-7 * (1 + fro(Q)), "P_AS = P_A,S(-)N + P_N", out)
    return out


@prop
def invertible_case_agreement(rng, n, tol):
    A = rnd.random_invertible_psd(rng, n)
    S = rnd.random_subspace(rng, n)
    P = distinguished_projection(A, S, tol)
    P2 = invertible_case_projection(A, S, tol)
    return [] if fro(P - P2) <= 1e-7 * max(fro(P), 1.0) else ["formula disagrees"]


def _pi_member(rng, n, tol, degenerate=False, inside_kernel=None):
    if degenerate and n >= 2:
        A, S = rnd.random_degenerate_pair(rng, n, inside_kernel)
    else:
        A, S = rnd.random_psd(rng, n), rnd.random_subspace(rng, n)
    fam = weighted_projection_family(A, S, tol)
    return A, S, fam, fam.sample(rng)


@prop
def projection_routes_agree(rng, n, tol):
    A, S, fam, T = _pi_member(rng, n, tol, degenerate=bool(rng.integers(2)))
    out = []
    rep = classify_operator(A, T, S, tol)
    _ok(rep["a_projection"] and rep["routes_agree"], "member: routes", out)
    _ok(rep["a_projection_into_S"], "member: into S", out)
    _ok(classify_operator(A, np.eye(n) - T, None, tol)["a_projection"], "complement", out)
    bad = T + rnd.random_complex(rng, n, n)
    _ok(classify_operator(A, bad, S, tol)["routes_agree"], "non-member: routes", out)
    return out


@prop
def krein_equivalences(rng, n, tol):
    A = rnd.random_psd(rng, n)
    S = rnd.random_subspace(rng, n)
    if rng.integers(2):
        T = distinguished_projection(A, S, tol)
    else:
        T = rnd.random_s_idempotent(rng, S)
    rep = classify_operator(A, T, None, tol)
    out = []
    _ok(rep["a_idempotent"], "idempotent", out)
    _ok(rep["a_selfadjoint"] == rep["a_contraction"] == rep["range_orthogonal"], "Krein", out)
    nonzero = fro(A @ T) > tol.bound(fro(A))
    if nonzero:
        _ok(rep["a_projection"] == rep["a_norm_one"] == rep["a_positive"], "unit seminorm and A-positivity", out)
    return out


@prop
def family_soundness(rng, n, tol):
    A, S, fam, T = _pi_member(rng, n, tol, degenerate=bool(rng.integers(2)))
    out = []
    _ok(check_weighted_projection_member(A, S, T, tol).passed, "Pi membership", out)
    _ok(check_block_form(A, S, T, tol).passed, "block form", out)
    _ok(check_decomposition_member(A, S, T, tol).passed, "decomposition", out)
    _ok(fro(A @ T - A @ fam.base) <= tol.bound(fro(A) * (1 + fro(T))), "AT = A P_AS", out)
    pfam = projection_family(A, S, tol)
    _ok(check_projection_member(A, S, pfam.sample(rng), tol).passed, "P membership", out)
    N = fam.range_space
    singleton = fam.is_singleton
    _ok(singleton == (N.dim == 0), "card Pi = 1 iff N = 0", out)
    # S = H leaves P(A, H) = {I} even when N(A) is nontrivial
    _ok(pfam.is_singleton == (N.dim == 0 or S.dim == n), "card P = 1 iff N = 0", out)
    if N.dim:
        W = fam.base + N.projector
        _ok(check_weighted_projection_member(A, S, W, tol).passed, "P_AS + P_N in Pi", out)
        _ok(fro(W @ W - W) > 1e-4, "P_AS + P_N not idempotent", out)
    return out


@prop
def minimality(rng, n, tol):
    if n < 2:
        return []
    A, S, fam, T = _pi_member(rng, n, tol, degenerate=True, inside_kernel=False)
    P = fam.base
    out = []
    _ok(np.linalg.norm(P, 2) <= np.linalg.norm(T, 2) + 1e-8, "operator norm", out)
    # with S inside N(A) the zero operator is an A-projection into S
    A0, S0 = rnd.random_degenerate_pair(rng, n, inside_kernel=True)
    _ok(check_weighted_projection_member(A0, S0, np.zeros((n, n)), tol).passed, "0 in Pi(A, N)", out)
    I = np.eye(n)
    for _ in range(10):
        x = rnd.random_complex(rng, n)
        _ok(np.linalg.norm((I - P) @ x) <= np.linalg.norm((I - T) @ x) + 1e-8, "pointwise", out)
    return out


@prop
def spline_optimality(rng, n, tol):
    C = rnd.random_matrix(rng, n, n)
    S = rnd.random_subspace(rng, n)
    x = rnd.random_complex(rng, n)
    fam = spline_set(C, S, x, tol)
    A = C.conj().T @ C
    out = []
    y = fam.sample(rng)
    rc, rp = spline_membership(C, S, x, y, tol)
    _ok(max(rc, rp) <= 1e-8 * (1 + fro(x) + fro(y)) * (1 + fro(A)), "(x+S) & A(S)^perp", out)
    _ok(dominance_sample_test(A, y, x, S, trials=50, seed=int(rng.integers(2**31))), "dominance", out)
    _, value = oracle_min_over_affine(A, x, S)
    _ok(abs(weighted_distance(C, S, x, tol) - value) <= 1e-7 * (1 + value), "distance", out)
    N = kernel_intersection(A, S, tol)
    zero = spline_set(C, S, np.zeros(n), tol)
    _ok(subspaces_equal(zero.direction_space, N) and not np.any(zero.representative), "sp(0) = N", out)
    return out


@prop
def lss_oracle(rng, n, tol):
    A = rnd.random_psd(rng, n)
    B = rnd.random_matrix(rng, n, n)
    y = rnd.random_complex(rng, n)
    x = a_lss_solve(A, B, y, tol)
    R = psd_sqrt(A)
    _, value = oracle_seminorm_lss(A, B, y)
    return [] if abs(np.linalg.norm(R @ (y - B @ x)) - value) <= 1e-8 * (1 + fro(y)) else ["objective"]


@prop
def weighted_inverses(rng, n, tol):
    A1 = rnd.random_psd(rng, n)
    A2 = rnd.random_psd(rng, n)
    B = rnd.random_matrix(rng, n, n)
    out = []
    fam = a_inverse_family(A1, B, tol)
    _ok(inverse_check(A1, B, fam.base, "a_inverse", tol=tol).passed, "A-inverse base", out)
    _ok(inverse_check(A1, B, fam.sample(rng), "a_inverse", tol=tol).passed, "A-inverse member", out)
    M = rnd.random_subspace(rng, n)
    G = restricted_a_inverse(A1, B, M, tol)
    _ok(inverse_check(A1, B, G, "restricted", M=M, tol=tol).passed, "restricted", out)
    G = a1a2_inverse(A1, A2, B, tol)
    _ok(inverse_check(A1, B, G, "a1a2", A2=A2, tol=tol).passed, "A1A2 characterization", out)
    _ok(inverse_check(A1, B, G, "weak_a1a2", A2=A2, tol=tol).passed, "weak A1A2", out)
    y = rnd.random_complex(rng, n)
    x = G @ y
    K = weighted_kernel(A1, B, tol)
    _, value = oracle_min_over_affine(A2, x, K)
    _ok(abs(np.linalg.norm(psd_sqrt(A2) @ x) - value) <= 1e-8 * (1 + fro(x)), "minimum A2-seminorm", out)
    return out


@prop
def wgi_contract(rng, n, tol):
    A1 = rnd.random_psd(rng, n)
    A2 = rnd.random_psd(rng, n)
    B = rnd.random_matrix(rng, n, n)
    out = []
    C = weighted_generalized_inverse(A1, A2, B, tol)
    _ok(inverse_check(A1, B, C, "wgi", A2=A2, tol=tol).passed, "four equations", out)
    rep = inverse_check(A1, B, C, "weak_wgi_system", A2=A2, tol=tol)
    _ok(rep.passed, "system", out)
    _ok(inverse_check(A1, B, C, "weak_a1a2", A2=A2, tol=tol).passed, "weak A1A2", out)
    bad = C + rnd.random_complex(rng, n, n)
    _ok(inverse_check(A1, B, bad, "weak_wgi_system", A2=A2, tol=tol)["forms_agree"], "corrupted", out)
    I = np.eye(n)
    _ok(fro(weighted_generalized_inverse(I, I, B, tol) - pseudo_inverse(B, tol)) <= 1e-9 * (1 + fro(C)),
        "identity weights", out)
    return out


@dataclass
class PropertyResult:
    name: str
    trials: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def trial_rng(seed: int, name: str, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode()), trial])


def run_suite(n: int = 6, trials: int = 20, seed: int = 0,
              tol: ToleranceConfig | None = None, names=None) -> list[PropertyResult]:
    tol = tol or ToleranceConfig()
    results = []
    for name in names or PROPERTIES:
        fn = PROPERTIES[name]
        res = PropertyResult(name, trials)
        for t in range(trials):
            try:
                msgs = fn(trial_rng(seed, name, t), n, tol)
            except Exception as exc:  # surfaced as a failure, not a crash
                msgs = [f"{type(exc).__name__}: {exc}"]
            res.failures.extend(f"trial {t}: {m}" for m in msgs)
        results.append(res)
    return results


def summarize(results: list[PropertyResult], elapsed: float | None = None) -> dict:
    doc = {
        "passed": all(r.passed for r in results),
        "properties": {r.name: {"trials": r.trials, "failures": r.failures[:10],
                                "n_failures": len(r.failures)} for r in results},
    }
    if elapsed is not None:
        doc["elapsed_seconds"] = round(elapsed, 3)
    return doc


def timed_suite(**kw):
    t0 = time.perf_counter()
    results = run_suite(**kw)
    return results, time.perf_counter() - t0
