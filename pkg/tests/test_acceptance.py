"""Acceptance criteria, each run at its stated tolerance.

Every criterion uses its own fixed-seed generator and draws the dimension
from 1..10 per trial.  A one-line verdict per criterion is printed at the end
of the pytest run.
"""

import sys

import numpy as np
import pytest

from weightedproj import matrixio
from weightedproj import testing as rnd
from weightedproj.cli import run
from weightedproj.numkernel import (
    column_space,
    fro,
    null_space,
    pseudo_inverse,
    psd_sqrt,
    subspace_ominus,
)
from weightedproj.oracle import dominance_sample_test, oracle_min_over_affine, oracle_seminorm_lss
from weightedproj.projections import (
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
from weightedproj.splines import spline_set, weighted_distance
from weightedproj.winverse import (
    a1a2_inverse,
    a_inverse_family,
    a_lss_solve,
    inverse_check,
    restricted_a_inverse,
    weighted_generalized_inverse,
    weighted_kernel,
)

SEED = 20240611
TRIALS = 100


def _rng(criterion):
    return np.random.default_rng([SEED, criterion])


def _dim(rng, low=1):
    return int(rng.integers(low, 11))


def _proj_diff(S1, S2):
    return fro(S1.projector - S2.projector) if S1.dim == S2.dim else np.inf


def _degenerate_or_generic(rng, n, inside_kernel=None):
    if n >= 2 and rng.integers(2):
        return rnd.random_degenerate_pair(rng, n, inside_kernel)
    return rnd.random_psd(rng, n), rnd.random_subspace(rng, n)


def test_distinguished_projection_contract(acceptance):
    rng = _rng(1)
    bad = []
    for t in range(TRIALS):
        n = _dim(rng)
        A = rnd.random_psd(rng, n)
        S = rnd.random_subspace(rng, n)
        Q = distinguished_projection(A, S)
        bound = 1e-8 * (1 + fro(A))
        if fro(Q @ Q - Q) > bound:
            bad.append(f"trial {t}: Q^2 != Q")
        if fro(A @ Q - Q.conj().T @ A) > bound:
            bad.append(f"trial {t}: AQ != Q^H A")
        if _proj_diff(column_space(Q), S) > 1e-7:
            bad.append(f"trial {t}: range(Q) != S")
        N = kernel_intersection(A, S)
        AS_perp = null_space(S.basis.conj().T @ A, ref_scale=np.linalg.norm(A, 2))
        if _proj_diff(null_space(Q), subspace_ominus(AS_perp, N)) > 1e-7:
            bad.append(f"trial {t}: kernel mismatch")
    acceptance(1, "distinguished projection contract", bad)


def test_invertible_case_agreement(acceptance):
    rng = _rng(2)
    bad = []
    for t in range(TRIALS):
        n = _dim(rng)
        A = rnd.random_invertible_psd(rng, n)
        S = rnd.random_subspace(rng, n)
        P = distinguished_projection(A, S)
        if fro(P - invertible_case_projection(A, S)) > 1e-7 * fro(P):
            bad.append(f"trial {t}: n={n}, dim S={S.dim}")
    acceptance(2, "invertible-case formula agreement", bad)


def test_equivalence_suites(acceptance):
    rng = _rng(3)
    bad = []
    for t in range(TRIALS):
        n = _dim(rng)
        A, S = _degenerate_or_generic(rng, n)
        T = weighted_projection_family(A, S).sample(rng)
        rep = classify_operator(A, T, S)
        if not (rep["a_projection"] and rep["routes_agree"] and rep["a_projection_into_S"]):
            bad.append(f"member {t}: {rep.failing()}")

    # non-members: perturbed members, and A-projections into another subspace;
    # a perturbed T can still be an A-projection (A = 0), just not one into S
    non_members = 0
    for t in range(10 * TRIALS):
        if non_members == TRIALS:
            break
        n = _dim(rng)
        A, S = _degenerate_or_generic(rng, n)
        if t % 2:
            U = weighted_projection_family(A, S).sample(rng) + rnd.random_complex(rng, n, n)
        else:
            U = weighted_projection_family(A, rnd.random_subspace(rng, n)).sample(rng)
        if check_weighted_projection_member(A, S, U).passed:
            continue
        non_members += 1
        rep = classify_operator(A, U, S)
        if not rep["routes_agree"] or (t % 2 == 0 and not rep["a_projection"]):
            bad.append(f"non-member {t}: routes disagree")
        if rep["a_projection_into_S"]:
            bad.append(f"non-member {t}: classified as into S")
    if non_members < TRIALS:
        bad.append(f"only {non_members} non-members drawn")

    for t in range(TRIALS):
        n = _dim(rng)
        A = rnd.random_psd(rng, n)
        S = rnd.random_subspace(rng, n)
        U, W = S.basis, S.complement().basis
        if t % 2:
            block = None
        else:  # the completion block of a member of P(A, S), giving an A-selfadjoint idempotent
            Q = projection_family(A, S).sample(rng)
            block = U.conj().T @ Q @ W
        T = rnd.random_s_idempotent(rng, S, block)
        rep = classify_operator(A, T)
        if not rep["a_idempotent"]:
            bad.append(f"idempotent {t}: not A-idempotent")
        if not rep["a_selfadjoint"] == rep["a_contraction"] == rep["range_orthogonal"]:
            bad.append(f"idempotent {t}: Krein equivalence broken")
        if fro(A @ T) > 1e-8 * (1 + fro(A)) and not rep["a_projection"] == rep["a_norm_one"] == rep["a_positive"]:
            bad.append(f"idempotent {t}: unit seminorm and A-positivity disagree")
    acceptance(3, "A-projection routes, Krein equivalences, unit seminorm", bad)


def test_family_soundness(acceptance):
    rng = _rng(4)
    bad = []
    separations = 0
    for t in range(TRIALS):
        n = _dim(rng)
        A, S = _degenerate_or_generic(rng, n)
        fam = weighted_projection_family(A, S)
        T = fam.sample(rng)
        if not check_weighted_projection_member(A, S, T).passed:
            bad.append(f"trial {t}: Pi member rejected")
        Q = projection_family(A, S).sample(rng)
        rep = check_projection_member(A, S, Q)
        if not rep.passed:
            bad.append(f"trial {t}: P member rejected {rep.failing()}")
        N = fam.range_space
        if N.dim:
            separations += 1
            W = fam.base + N.projector
            if not check_weighted_projection_member(A, S, W).passed:
                bad.append(f"trial {t}: P_AS + P_N not in Pi")
            if fro(W @ W - W) <= 1e-4:
                bad.append(f"trial {t}: P_AS + P_N idempotent")
    if separations == 0:
        bad.append("no instance with N != 0")
    acceptance(4, "affine-family soundness and cardinality separation", bad)


def test_minimality(acceptance):
    rng = _rng(5)
    bad = []
    for t in range(TRIALS):
        n = _dim(rng, low=2)
        # S sticks out of N(A); with S inside N(A) the zero operator is a member
        A, S = rnd.random_degenerate_pair(rng, n, inside_kernel=False)
        fam = weighted_projection_family(A, S)
        assert fam.range_space.dim > 0
        P = fam.base
        T = fam.sample(rng)
        if np.linalg.norm(P, 2) > np.linalg.norm(T, 2) + 1e-8:
            bad.append(f"trial {t}: operator norm")
        I = np.eye(n)
        for _ in range(10):
            x = rnd.random_complex(rng, n)
            if np.linalg.norm((I - P) @ x) > np.linalg.norm((I - T) @ x) + 1e-8:
                bad.append(f"trial {t}: pointwise")
    acceptance(5, "minimality of the distinguished projection", bad)


def test_spline_optimality(acceptance):
    rng = _rng(6)
    bad = []
    for t in range(TRIALS):
        n = _dim(rng)
        C = rnd.random_matrix(rng, n, n)
        S = rnd.random_subspace(rng, n)
        x = rnd.random_complex(rng, n)
        A = C.conj().T @ C
        fam = spline_set(C, S, x)
        for k in range(3):
            y = fam.sample(rng)
            if not dominance_sample_test(A, y, x, S, trials=200, seed=1000 * t + k, tol=1e-8):
                bad.append(f"trial {t}: member {k} dominated")
        _, value = oracle_min_over_affine(A, x, S)
        if abs(weighted_distance(C, S, x) - value) > 1e-7:
            bad.append(f"trial {t}: distance")
        zero = spline_set(C, S, np.zeros(n))
        if np.any(zero.representative) or _proj_diff(zero.direction_space, kernel_intersection(A, S)) > 1e-7:
            bad.append(f"trial {t}: sp(C, S, 0) != N")
    acceptance(6, "spline optimality", bad)


def test_alss_oracle(acceptance):
    rng = _rng(7)
    bad = []
    for t in range(TRIALS):
        n = _dim(rng)
        A = rnd.random_psd(rng, n, rank=int(rng.integers(0, n)))
        B = rnd.random_matrix(rng, n, n, rank=int(rng.integers(0, n)))
        y = rnd.random_complex(rng, n)
        x = a_lss_solve(A, B, y)
        _, value = oracle_seminorm_lss(A, B, y)
        if abs(np.linalg.norm(psd_sqrt(A) @ (y - B @ x)) - value) > 1e-8 * (1 + np.linalg.norm(y)):
            bad.append(f"trial {t}")
    acceptance(7, "A-least squares against the oracle", bad)


def test_inverse_characterizations(acceptance):
    rng = _rng(8)
    bad = []
    for t in range(TRIALS):
        n = _dim(rng)
        A1, A2 = rnd.random_psd(rng, n), rnd.random_psd(rng, n)
        B = rnd.random_matrix(rng, n, n)
        fam = a_inverse_family(A1, B)
        members = [fam.base] + ([fam.sample(rng) for _ in range(50)] if t == 0 else [fam.sample(rng)])
        for G in members:
            if not inverse_check(A1, B, G, "a_inverse").passed:
                bad.append(f"trial {t}: A-inverse member")
        M = rnd.random_subspace(rng, n)
        if not inverse_check(A1, B, restricted_a_inverse(A1, B, M), "restricted", M=M).passed:
            bad.append(f"trial {t}: restricted")
        G = a1a2_inverse(A1, A2, B)
        if not inverse_check(A1, B, G, "a1a2", A2=A2).passed:
            bad.append(f"trial {t}: A1A2 conditions")
        if not inverse_check(A1, B, G, "weak_a1a2", A2=A2).passed:
            bad.append(f"trial {t}: weak equations")
        x = G @ rnd.random_complex(rng, n)
        _, value = oracle_min_over_affine(A2, x, weighted_kernel(A1, B))
        if abs(np.linalg.norm(psd_sqrt(A2) @ x) - value) > 1e-8:
            bad.append(f"trial {t}: minimum A2-seminorm")
    acceptance(8, "weighted inverse characterizations", bad)


def _weak_wgi_member(rng, A1, A2, B):
    """``(I - T2) B^+ T1`` with ``T1 in Pi(A1, R(B))`` and ``T2 in Pi(A2, N(B))``."""
    n = B.shape[0]
    R, K = column_space(B), null_space(B)
    N1, N2 = kernel_intersection(A1, R), kernel_intersection(A2, K)
    T1 = distinguished_projection(A1, R) + N1.projector @ rnd.random_complex(rng, n, n) @ (np.eye(n) - R.projector)
    T2 = distinguished_projection(A2, K) + N2.projector @ rnd.random_complex(rng, n, n)
    return (np.eye(n) - T2) @ pseudo_inverse(B) @ T1


def test_wgi_contract(acceptance):
    rng = _rng(9)
    bad = []
    for t in range(TRIALS):
        n = _dim(rng)
        A1 = rnd.random_psd(rng, n, rank=int(rng.integers(0, n + 1)))
        A2 = rnd.random_psd(rng, n, rank=int(rng.integers(0, n + 1)))
        # B = 0 would make every G a weak w.g.i., leaving nothing to corrupt
        B = rnd.random_matrix(rng, n, n, rank=int(rng.integers(1, n + 1)))
        C = weighted_generalized_inverse(A1, A2, B)
        if not inverse_check(A1, B, C, "wgi", A2=A2).passed:
            bad.append(f"trial {t}: four equations")
        I = np.eye(n)
        if fro(weighted_generalized_inverse(I, I, B) - pseudo_inverse(B)) > 1e-9:
            bad.append(f"trial {t}: identity weights")
        G = _weak_wgi_member(rng, A1, A2, B)
        rep = inverse_check(A1, B, G, "weak_wgi_system", A2=A2)
        if not (rep["forms_agree"] and rep.values["system"] == 1.0):
            bad.append(f"trial {t}: member {rep.values}")
        rep = inverse_check(A1, B, G + rnd.random_complex(rng, n, n), "weak_wgi_system", A2=A2)
        if not (rep["forms_agree"] and rep.values["system"] == 0.0):
            bad.append(f"trial {t}: corrupted {rep.values}")
    acceptance(9, "weighted generalized inverse contract", bad)


def test_cli(acceptance, tmp_path, capsys):
    rng = _rng(10)
    bad = []
    for i in range(20):
        M = rnd.random_complex(rng, _dim(rng), _dim(rng))
        p1, p2 = tmp_path / f"m{i}.json", tmp_path / f"r{i}.json"
        matrixio.write_matrix(p1, M)
        matrixio.write_matrix(p2, matrixio.read_matrix(p1))
        if p1.read_bytes() != p2.read_bytes():
            bad.append(f"file {i}: round trip")
    eye, half = tmp_path / "I.json", tmp_path / "D.json"
    matrixio.write_matrix(eye, np.eye(2))
    matrixio.write_matrix(half, np.diag([1.0, 0.0]))
    zero = tmp_path / "Z.json"
    matrixio.write_matrix(zero, np.zeros((2, 2)))
    codes = {
        0: run(["pinv", "--B", str(half)]),
        1: run(["check", "--kind", "a-inverse", "--A", str(eye), "--B", str(half), "--G", str(zero)]),
        2: run(["pinv", "--B", str(tmp_path / "missing.json")]),
    }
    bad += [f"exit code {want}, got {got}" for want, got in codes.items() if want != got]
    if run(["verify", "--n", "8", "--trials", "100", "--seed", "42"]) != 0:
        bad.append("verify --n 8 --trials 100 --seed 42 failed")
    capsys.readouterr()
    acceptance(10, "command-line round trips, exit codes, verify", bad)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
