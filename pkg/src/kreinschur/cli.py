"""Command-line front end.

Exit codes: 0 success, 1 mathematical failure (precondition or FAIL
verdict), 2 invalid input.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Callable

import numpy as np

from . import completion as comp
from . import krein_schur as ks
from . import oracle
from .errors import KreinSchurError, NotKreinSelfadjoint, ShapeMismatch
from .hilbert import is_complementable, is_weakly_complementable, signed_split
from .io import Problem, ProblemError, dumps, load_problem
from .krein import is_krein_selfadjoint, is_regular_subspace, polar_factorization
from .numkernel import hermitize, opnorm

REPORT_FLOOR = 1e-12


class _Failure(Exception):
    """Mathematical failure with a JSON payload for standard output."""

    def __init__(self, payload: dict):
        super().__init__(payload.get("message", ""))
        self.payload = payload


def _error_payload(exc: KreinSchurError) -> dict:
    return {"error": exc.kind, "message": str(exc)}


def _quantize(x: float | None) -> float | None:
    """Small diagnostics are roundoff; report them as 0 and keep 6 digits otherwise."""
    if x is None:
        return None
    if abs(x) < REPORT_FLOOR:
        return 0.0
    return float(f"{x:.6g}")


def _jw(p: Problem) -> np.ndarray:
    return hermitize(p.space.J @ p.operator)


def cmd_check(p: Problem, args) -> dict:
    W, S, space, tol = p.operator, p.subspace, p.space, p.tolerances
    sa = is_krein_selfadjoint(W, space, tol)
    out = {
        "krein_selfadjoint": sa,
        "regular_subspace": is_regular_subspace(S, space, tol),
        "weakly_complementable": None,
        "complementable": None,
        "signed_split_dims": None,
    }
    if sa:
        B = _jw(p)
        split = signed_split(B, S, tol)
        out.update(
            weakly_complementable=is_weakly_complementable(B, S, tol),
            complementable=is_complementable(B, S, tol),
            signed_split_dims=[split.plus.dim, split.minus.dim],
        )
    return out


def _projection_route(W, S, space, tol):
    Q = ks.krein_projection_element(W, S, space, tol)
    return W @ (np.eye(space.dim) - Q)


METHODS: dict[str, Callable] = {
    "regular": ks.krein_schur_regular,
    "mary": ks.mary_schur,
    "mmp": ks.mmp_schur,
    "projection": _projection_route,
}


def cmd_schur(p: Problem, args) -> dict:
    W, S, space, tol = p.operator, p.subspace, p.space, p.tolerances
    method = args.method
    if method != "auto":
        X = METHODS[method](W, S, space, tol)
        return {"method": method, "schur": X, "compression": W - X, "agreement": None}
    X = ks.krein_schur_complement(W, S, space, tol)
    ran, dev = ["definition"], 0.0
    for name, fn in METHODS.items():
        try:
            Y = fn(W, S, space, tol)
        except KreinSchurError:
            continue
        ran.append(name)
        dev = max(dev, opnorm(Y - X) / max(opnorm(W), 1e-300))
    return {"method": "auto", "methods": ran, "schur": X, "compression": W - X,
            "agreement": _quantize(dev)}


def _require_w_blocks(p: Problem):
    if p.w11 is None or p.w12 is None:
        raise ProblemError("complete needs 'w11' and 'w12'")
    try:
        return comp.IncompleteBlock(p.subspace, p.w11, p.w12, p.space, p.tolerances)
    except (ValueError, NotKreinSelfadjoint) as exc:
        raise ProblemError(str(exc)) from None


def cmd_complete(p: Problem, args) -> dict:
    P = _require_w_blocks(p)
    if not comp.completion_exists(P):
        raise _Failure({"exists": False, "error": "NoCompletion",
                        "message": "R(w12) is not contained in R(d)"})
    w22, W = comp.minimal_completion(P)
    samples = comp.sample_solution_set(P, seed=p.seed, count=args.samples)
    return {
        "exists": True,
        "w22_min": w22,
        "W_min": W,
        "nu_minus_w11": comp.nu_minus(P.w11, P.frame.J1, p.tolerances),
        "nu_minus_W": comp.nu_minus(W, p.space.J, p.tolerances),
        "samples": samples,
    }


def _report_dict(r: oracle.Report) -> dict:
    d = r.to_dict()
    for key in ("worst_slack", "attainment_residual", "max_deviation"):
        d[key] = _quantize(d[key])
    if r.verdict:
        d.pop("witness", None)
    return d


def cmd_verify(p: Problem, args) -> dict:
    W, S, space, tol = p.operator, p.subspace, p.space, p.tolerances
    if not is_krein_selfadjoint(W, space, tol):
        raise ProblemError("operator is not selfadjoint for the Krein metric")
    seed = p.seed if args.seed is None else args.seed
    N = args.trials
    B = _jw(p)
    reports = [oracle.verify_supinf_minmax(B, S, N, seed, tol), oracle.verify_three_term(B, S, tol)]
    if signed_split(B, S, tol).minus.dim == 0:
        reports.append(oracle.verify_inf_over_projections(B, S, N, seed, tol))
        reports.append(oracle.verify_order_set_max(B, S, N, seed, tol))
    elif signed_split(B, S, tol, zero_to="minus").plus.dim == 0:
        reports.append(oracle.verify_order_set_min(B, S, N, seed, tol))
    reports.append(oracle.verify_krein_identities(W, S, space, N, seed, tol))
    reports.append(oracle.verify_signature_independence(W, S, space, N, seed, tol))
    ok = all(r.verdict for r in reports)
    out = {"reports": [_report_dict(r) for r in reports], "verdict": "PASS" if ok else "FAIL",
           "trials": N, "seed": seed}
    if not ok:
        raise _Failure(out)
    return out


def cmd_factor(p: Problem, args) -> dict:
    W, space = p.operator, p.space
    pf = polar_factorization(W, space, p.tolerances)
    err = opnorm(pf.reconstruct(space.J) - W) / max(opnorm(W), 1e-300) if W.size else 0.0
    return {"D": pf.D, "K_signature": pf.K_signature, "rank": pf.rank,
            "reconstruction_error": _quantize(err)}


COMMANDS = {
    "check": (cmd_check, True),
    "schur": (cmd_schur, True),
    "complete": (cmd_complete, False),
    "verify": (cmd_verify, True),
    "factor": (cmd_factor, True),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("problem", nargs="?", default="-", help="problem file (default: standard input)")
    common.add_argument("--tol-rank", type=float, help="override rank_rel")
    common.add_argument("--tol-eq", type=float, help="override eq_rel")

    parser = argparse.ArgumentParser(prog="kreinschur", description="Schur complements in Hilbert and Krein spaces")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="complementability and regularity verdicts")
    s = sub.add_parser("schur", parents=[common], help="Schur complement and compression")
    s.add_argument("--method", choices=["auto", *METHODS], default="auto")
    c = sub.add_parser("complete", parents=[common], help="inertia-preserving completion")
    c.add_argument("--samples", type=int, default=2, help="number of sampled completions")
    v = sub.add_parser("verify", parents=[common], help="randomized verification bundle")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=None)
    sub.add_parser("factor", parents=[common], help="polar factorization W = D D^#")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fn, need_op = COMMANDS[args.command]
    try:
        p = load_problem(_read(args.problem), need_operator=need_op)
        overrides = {}
        if args.tol_rank is not None:
            overrides["rank_rel"] = args.tol_rank
        if args.tol_eq is not None:
            overrides["eq_rel"] = args.tol_eq
        if overrides:
            p = replace(p, tolerances=replace(p.tolerances, **overrides))
        if getattr(args, "trials", 0) < 0 or getattr(args, "samples", 0) < 0:
            raise ProblemError("counts must be nonnegative")
        result = fn(p, args)
    except _Failure as exc:
        sys.stdout.write(dumps(exc.payload))
        return 1
    except (ProblemError, OSError, ShapeMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KreinSchurError as exc:
        sys.stdout.write(dumps(_error_payload(exc)))
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(dumps(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
