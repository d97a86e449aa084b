"""Command-line interface: ``qgal <command> [options] files``.

Exit codes: 0 every check passed, 1 a mathematical check failed or a
construction was inconsistent, 2 the input could not be read or parsed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .cocycle import check_cocycle, coassociativity_residual, twist_coproduct
from .fqg import (HaarNotFaithfulError, SolveError, dual_report, multiplicative_unitary,
                  pentagon_residual, regular, validate)
from .galois import NotErgodicError, NotFaithfulError, galois_report
from .io import ParseError, load_cocycle, load_qg, load_recipe, save_qg
from .reflection import dual_isomorphism, reflect
from .report import DEFAULT_TOL, Report
from .suite import suite_report
from .tensor import residual

MAX_TOL = 1e-2


class UsageError(Exception):
    pass


def _tolerance(arg) -> float:
    raw = arg if arg is not None else os.environ.get("QGAL_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError as exc:
        raise UsageError(f"tolerance {raw!r} is not a number") from exc
    if not 0 < tol <= MAX_TOL:
        raise UsageError(f"tolerance must lie in (0, {MAX_TOL:g}], got {tol:g}")
    return tol


def _load_qg(path):
    try:
        return load_qg(path)
    except ValueError as exc:          # includes ParseError and shape errors
        raise ParseError(str(exc)) from exc


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_validate(args, tol) -> Report:
    qg = _load_qg(args.path)
    try:
        return validate(qg, tol)
    except HaarNotFaithfulError as exc:
        rep = Report(f"validate {qg.name}", tol=tol)
        rep.le("haar_faithful_positive", float("inf"), note=str(exc))
        return rep


def cmd_dual(args, tol) -> Report:
    qg = _load_qg(args.path)
    rep = dual_report(qg, tol)
    if args.out:
        save_qg(regular(qg).dual, args.out)
        rep.info("written", args.out)
    return rep


def cmd_pentagon(args, tol) -> Report:
    qg = _load_qg(args.path)
    mu = multiplicative_unitary(qg, tol=1.0)
    d = qg.dim
    rep = Report(f"pentagon {qg.name}", tol=tol)
    for name, X in (("W", mu.W), ("V", mu.V), ("W_hat", mu.What)):
        rep.le(f"{name}_unitary", residual(X.conj().T @ X, np.eye(d * d)))
        rep.le(f"pentagon_{name}", pentagon_residual(X, d))
    return rep


def _cocycle(args):
    qg = _load_qg(args.qg)
    try:
        oc = load_cocycle(args.cocycle, qg)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    return qg, oc


def cmd_cocycle_check(args, tol) -> Report:
    qg, oc = _cocycle(args)
    rep = Report(f"cocycle-check {oc.name}", tol=tol)
    rep.extend(check_cocycle(qg, oc.omega, tol), prefix="cocycle")
    reg = regular(qg)
    coassoc, member = coassociativity_residual(
        lambda y: oc.omega @ reg.dual_coproduct(y) @ oc.omega.conj().T, reg.Mhat.elements)
    rep.le("twisted_coassociativity", coassoc)
    rep.le("twisted_coproduct_membership", member)
    return rep


def cmd_twist(args, tol) -> Report:
    from .galois import cocycle_crossed_product
    qg, oc = _cocycle(args)
    rep = Report(f"twist {qg.name} by {oc.name}", tol=tol)
    cc = check_cocycle(qg, oc.omega, tol)
    rep.extend(cc, prefix="cocycle")
    if not cc.passed:
        return rep
    go = cocycle_crossed_product(qg, oc, tol)
    rep.extend(galois_report(go, tol), prefix="galois")
    rq = reflect(go, tol)
    rep.extend(rq.witness, prefix="reflect")
    th = twist_coproduct(qg, oc, tol)
    rep.info("twisted_deviation_from_dual", th.deviation)
    for k, v in dual_isomorphism(go, rq).items():
        rep.le(f"matches_twisted_dual.{k}", v)
    rep.info("commutative", bool(rq.witness.value("commutativity_residual") <= tol))
    rep.info("cocommutative", bool(rq.witness.value("cocommutativity_residual") <= tol))
    if args.out:
        save_qg(rq.qg_out.renamed(f"{qg.name}^{oc.name}"), args.out)
        rep.info("written", args.out)
    return rep


def cmd_suite(args, tol) -> Report:
    recipe = load_recipe(args.recipe)
    try:
        go = recipe.build()
    except (SolveError, NotErgodicError, NotFaithfulError, ValueError) as exc:
        rep = Report(f"suite {recipe.name}", tol=tol)
        rep.le("construction_error", float("inf"), note=f"{type(exc).__name__}: {exc}")
        return rep
    return suite_report(go, tol, seed=args.seed,
                        realized_on_dual=recipe.kind in ("trivial", "cocycle"),
                        timing=args.timing)


COMMANDS = {
    "validate": cmd_validate,
    "dual": cmd_dual,
    "pentagon": cmd_pentagon,
    "cocycle-check": cmd_cocycle_check,
    "twist": cmd_twist,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", default=None,
                        help="tolerance for every check (default: $QGAL_TOL or 1e-9)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized controls")
    common.add_argument("--out", default=None, help="output file for constructed objects")
    common.add_argument("--timing", action="store_true", help="record wall-clock timings")
    p = argparse.ArgumentParser(prog="qgal", description="Galois objects of finite quantum groups")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("validate", "check the axioms of a quantum group file"),
                           ("dual", "build and validate the dual"),
                           ("pentagon", "unitarity and pentagon of W, V and W_hat")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("path")
    for name, helptext in (("cocycle-check", "check a unitary 2-cocycle"),
                           ("twist", "reflect the cocycle Galois object")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("qg")
        sp.add_argument("cocycle")
    sp = sub.add_parser("suite", parents=[common], help="full verification suite of a recipe")
    sp.add_argument("recipe")
    return p


def _emit(rep: Report, args, argv, elapsed) -> str:
    if args.format == "json":
        out = {"command": ["qgal", *argv], "seed": args.seed, **rep.as_dict()}
        if args.timing:
            out["timing_s"] = round(elapsed, 4)
        return json.dumps(out, indent=1)
    text = rep.to_text()
    if args.timing:
        text += f"\ntime: {elapsed:.3f} s"
    return text


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        tol = _tolerance(args.tol)
    except UsageError as exc:
        print(f"qgal: {exc}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        rep = COMMANDS[args.command](args, tol)
    except ParseError as exc:
        print(f"qgal: {exc}", file=sys.stderr)
        return 2
    except (SolveError, NotErgodicError, NotFaithfulError, HaarNotFaithfulError,
            ValueError, RuntimeError) as exc:
        print(f"qgal: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(_emit(rep, args, argv, time.perf_counter() - t0))
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
