"""Command-line front end.

Exit codes: 0 success, 1 check or precondition failure, 2 input error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import matrixio, projections, splines, verify, winverse
from ._validation import InputError, PreconditionError
from .numkernel import (
    Subspace,
    ToleranceConfig,
    block_decompose,
    column_space,
    pseudo_inverse,
)

TOL_ENV = "WEIGHTEDPROJ_TOL"

CHECK_KINDS = {
    "a-projection": "a_projection",
    "p-member": "p_member",
    "pi-member": "pi_member",
    "a-inverse": "a_inverse",
    "restricted": "restricted",
    "a1a2": "a1a2",
    "weak-a1a2": "weak_a1a2",
    "wgi": "wgi",
    "weak-wgi-system": "weak_wgi_system",
}


class CheckFailed(Exception):
    def __init__(self, doc):
        super().__init__("check failed")
        self.doc = doc


def _mat(path, flag):
    if path is None:
        raise InputError(f"missing required matrix {flag}")
    return matrixio.read_matrix(path)


def _space(path, flag, tol):
    return column_space(_mat(path, flag), tol)


def _family_doc(fam):
    return {"base": matrixio.matrix_to_doc(fam.base),
            "range_basis": matrixio.matrix_to_doc(fam.range_space.basis),
            "domain_basis": matrixio.matrix_to_doc(fam.domain_space.basis)}


def _doc(result, residuals=None, dims=None):
    return {"result": result, "residuals": residuals or {}, "dims": dims or {}}


def _m(M):
    return matrixio.matrix_to_doc(M)


# -- subcommands ------------------------------------------------------------


def cmd_decompose(a, tol):
    A = _mat(a.A, "--A")
    S = _space(a.S, "--S", tol)
    dec = block_decompose(A, S)
    res = {"a": _m(dec.a), "b": _m(dec.b), "c": _m(dec.c),
           "S_basis": _m(S.basis), "S_perp_basis": _m(dec.complement.basis)}
    return _doc(res, {"range_condition": dec.range_condition_residual()},
                {"n": S.ambient_dim, "k": S.dim})


def cmd_pinv(a, tol):
    B = _mat(a.B, "--B")
    X = pseudo_inverse(B, tol)
    r = {"BXB-B": float(np.linalg.norm(B @ X @ B - B)),
         "XBX-X": float(np.linalg.norm(X @ B @ X - X))}
    return _doc(_m(X), r, {"rows": B.shape[0], "cols": B.shape[1]})


def cmd_project(a, tol):
    A = _mat(a.A, "--A")
    S = _space(a.S, "--S", tol)
    cert = projections.compatibility_certificate(A, S, tol)
    Q = projections.distinguished_projection(A, S, tol)
    r = {"compatibility": cert.residual, "Q^2-Q": float(np.linalg.norm(Q @ Q - Q)),
         "AQ-Q^HA": float(np.linalg.norm(A @ Q - Q.conj().T @ A))}
    return _doc(_m(Q), r, {"n": S.ambient_dim, "S": S.dim, "N": cert.degenerate.dim})


def _family_cmd(builder):
    def run(a, tol):
        A = _mat(a.A, "--A")
        S = _space(a.S, "--S", tol)
        fam = builder(A, S, tol)
        return _doc(_family_doc(fam), {}, {"param_dims": list(fam.param_dims)})
    return run


def cmd_classify(a, tol):
    A = _mat(a.A, "--A")
    T = _mat(a.T, "--T")
    S = _space(a.S, "--S", tol) if a.S else None
    rep = projections.classify_operator(A, T, S, tol)
    return _doc(rep.to_dict(), rep.residuals, {"n": T.shape[0]})


def cmd_spline(a, tol):
    C = _mat(a.C, "--C")
    S = _space(a.S, "--S", tol)
    x = _mat(a.x, "--x").ravel()
    fam = splines.spline_set(C, S, x, tol)
    dist = splines.weighted_distance(C, S, x, tol)
    res = {"representative": _m(fam.representative),
           "direction_basis": _m(fam.direction_space.basis), "distance": dist}
    return _doc(res, {}, {"n": S.ambient_dim, "N": fam.direction_space.dim})


def cmd_alss(a, tol):
    A, B = _mat(a.A, "--A"), _mat(a.B, "--B")
    y = _mat(a.y, "--y").ravel()
    x = winverse.a_lss_solve(A, B, y, tol)
    BH = B.conj().T
    r = {"normal_equation": float(np.linalg.norm(BH @ A @ B @ x - BH @ A @ y))}
    return _doc(_m(x), r, {"n": B.shape[0]})


def cmd_ainv(a, tol):
    A, B = _mat(a.A, "--A"), _mat(a.B, "--B")
    fam = winverse.a_inverse_family(A, B, tol)
    return _doc(_family_doc(fam), {}, {"param_dims": list(fam.param_dims)})


def cmd_rainv(a, tol):
    A, B = _mat(a.A, "--A"), _mat(a.B, "--B")
    M = _space(a.M, "--M", tol)
    G = winverse.restricted_a_inverse(A, B, M, tol)
    rep = winverse.inverse_check(A, B, G, "restricted", M=M, tol=tol)
    return _doc(_m(G), rep.residuals, {"n": B.shape[0], "M": M.dim})


def _two_weight(fn, kind):
    def run(a, tol):
        A1, A2, B = _mat(a.A1, "--A1"), _mat(a.A2, "--A2"), _mat(a.B, "--B")
        G = fn(A1, A2, B, tol)
        rep = winverse.inverse_check(A1, B, G, kind, A2=A2, tol=tol)
        return _doc(_m(G), rep.residuals, {"n": B.shape[0]})
    return run


def cmd_check(a, tol):
    kind = CHECK_KINDS[a.kind]
    if kind in ("a_projection", "p_member", "pi_member"):
        A, T = _mat(a.A, "--A"), _mat(a.T, "--T")
        S = _space(a.S, "--S", tol) if a.S else None
        if kind == "a_projection":
            rep = projections.classify_operator(A, T, S, tol)
            keys = ["a_projection", "routes_agree"] + (["a_projection_into_S"] if S else [])
            ok = all(rep[k] for k in keys)
        else:
            if S is None:
                raise InputError(f"--kind {a.kind} needs --S")
            check = (projections.check_projection_member if kind == "p_member"
                     else projections.check_weighted_projection_member)
            rep = check(A, S, T, tol)
            ok = rep.passed
    else:
        A1 = _mat(a.A1 or a.A, "--A1/--A")
        B, G = _mat(a.B, "--B"), _mat(a.G, "--G")
        A2 = _mat(a.A2, "--A2") if a.A2 else None
        M = _space(a.M, "--M", tol) if a.M else None
        rep = winverse.inverse_check(A1, B, G, kind, A2=A2, M=M, tol=tol)
        ok = rep.passed
    doc = _doc({"kind": a.kind, "passed": ok, **rep.to_dict()}, rep.residuals)
    if not ok:
        raise CheckFailed(doc)
    return doc


def cmd_verify(a, tol):
    if a.n < 1 or a.trials < 1:
        raise InputError("--n and --trials must be positive")
    results, elapsed = verify.timed_suite(n=a.n, trials=a.trials, seed=a.seed, tol=tol)
    summary = verify.summarize(results, elapsed)
    doc = _doc(summary, {}, {"n": a.n, "trials": a.trials, "seed": a.seed})
    if not summary["passed"]:
        raise CheckFailed(doc)
    return doc


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="weightedproj",
        description="Seminorm-orthogonal projections and weighted generalized inverses.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help=f"residual tolerance (default 1e-8, or ${TOL_ENV})")
    common.add_argument("--rank-tol", type=float, default=1e-10,
                        help="relative singular value cutoff (default 1e-10)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    for flag in ("A", "A1", "A2", "B", "C", "G", "T", "S", "M", "x", "y"):
        common.add_argument(f"--{flag}", metavar="FILE", default=None)

    sub = p.add_subparsers(dest="command", required=True)
    specs = [
        ("decompose", cmd_decompose, "blocks a, b, c of A relative to S"),
        ("pinv", cmd_pinv, "Moore-Penrose inverse of B"),
        ("project", cmd_project, "distinguished A-selfadjoint projection onto S"),
        ("pfamily", _family_cmd(projections.projection_family), "A-selfadjoint projections onto S"),
        ("pifamily", _family_cmd(projections.weighted_projection_family), "A-projections into S"),
        ("classify", cmd_classify, "A-projection predicates for T"),
        ("spline", cmd_spline, "spline interpolants of x and the weighted distance to S"),
        ("alss", cmd_alss, "A-least squares solution of Bx = y"),
        ("ainv", cmd_ainv, "family of A-inverses of B"),
        ("rainv", cmd_rainv, "A-inverse of B restricted to M"),
        ("a12inv", _two_weight(winverse.a1a2_inverse, "a1a2"), "A1A2-inverse of B"),
        ("wgi", _two_weight(winverse.weighted_generalized_inverse, "wgi"),
         "weighted generalized inverse of B"),
        ("check", cmd_check, "test a matrix against a definition"),
        ("verify", cmd_verify, "run the randomized invariant suite"),
    ]
    for name, fn, helptext in specs:
        sp = sub.add_parser(name, parents=[common], help=helptext, description=helptext)
        sp.set_defaults(func=fn)
        if name == "check":
            sp.add_argument("--kind", required=True, choices=sorted(CHECK_KINDS))
        if name == "verify":
            sp.add_argument("--n", type=int, default=6)
            sp.add_argument("--trials", type=int, default=20)
    return p


def _tolerances(args) -> ToleranceConfig:
    residual = args.tol
    if residual is None:
        env = os.environ.get(TOL_ENV)
        try:
            residual = float(env) if env else 1e-8
        except ValueError:
            raise InputError(f"${TOL_ENV} is not a number: {env!r}") from None
    return ToleranceConfig(rank_rel_tol=args.rank_tol, residual_tol=residual)


def _emit(doc, args, tol):
    doc["tolerances"] = {"residual_tol": tol.residual_tol, "rank_rel_tol": tol.rank_rel_tol}
    text = matrixio.dumps(doc) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        tol = _tolerances(args)
        doc = args.func(args, tol)
    except CheckFailed as exc:
        _emit(exc.doc, args, tol)
        return 1
    except PreconditionError as exc:
        print(f"weightedproj: precondition failed: {exc}", file=sys.stderr)
        return 1
    except (InputError, OSError) as exc:
        print(f"weightedproj: input error: {exc}", file=sys.stderr)
        return 2
    _emit(doc, args, tol)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
