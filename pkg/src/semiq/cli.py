"""Command-line entry point: `semiq <subcommand> ...`.

Exit codes: 0 success, 1 FailsToSpan, 2 malformed input, 3 guard exceeded,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, Callable

from . import experiments, rewriting
from .combinatorics import CorrelatedDiagram, rsk, rsk_inverse
from .evaluation import (DEFAULT_TERM_LIMIT, EvaluationLimitError, MatrixTuple, eval_phi, mixed_discriminant,
                         phi_via_mdisc)
from .straightening import StraighteningError, canonical_form, pi_jk, straighten
from .tableaux import BracketMonomial, CorrelatedTableau, Expression, format_fraction, parse_fraction

EXIT_OK = 0
EXIT_FAILS_TO_SPAN = 1
EXIT_INPUT = 2
EXIT_GUARD = 3
EXIT_VERIFY = 4

log = logging.getLogger("semiq")


class InputError(ValueError):
    pass


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write to a temporary file in the target directory, then rename over the target."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def emit(args: argparse.Namespace, text: str) -> None:
    if getattr(args, "out", None):
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_expression(path: str) -> Expression:
    """An Expression file, or a single tableau file read as a one-term expression."""
    obj = load_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "terms" in obj:
        return Expression.from_json(obj)
    if "cells" in obj:
        return Expression.of(CorrelatedTableau.from_json(obj))
    raise InputError(f"{path}: expected an expression or a tableau")


def _combination_json(n: int, d: int, comb: dict) -> dict:
    return {"n": n, "d": d, "terms": [{"rows": [list(r) for r in rows], "coeff": format_fraction(c)}
                                      for rows, c in sorted(comb.items())]}


def cmd_straighten(args: argparse.Namespace) -> int:
    obj = load_json(args.input)
    if isinstance(obj, dict) and "rows" in obj:
        mono = BracketMonomial.from_json(obj)
        if mono is None:
            out = {"n": obj.get("n"), "d": obj.get("d"), "terms": []}
        elif args.pi:
            out = _combination_json(mono.n, mono.d, pi_jk(mono, *args.pi))
        else:
            out = _combination_json(mono.n, mono.d, straighten(mono))
    else:
        if args.pi:
            raise InputError("--pi applies to a single bracket monomial")
        expr = load_expression(args.input)
        out = canonical_form(expr).lift().to_json()
    emit(args, dump_json(out))
    return EXIT_OK


def cmd_canon(args: argparse.Namespace) -> int:
    emit(args, dump_json(canonical_form(load_expression(args.input)).to_json()))
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    expr = load_expression(args.expr)
    mats = MatrixTuple.from_json(load_json(args.matrices))
    value = eval_phi(expr, mats, limit=args.term_limit)
    emit(args, format_fraction(value) + "\n")
    return EXIT_OK


def cmd_mdisc(args: argparse.Namespace) -> int:
    obj = load_json(args.matrices)
    if args.tableau:
        c = CorrelatedTableau.from_json(load_json(args.tableau))
        value = phi_via_mdisc(c, MatrixTuple.from_json(obj))
    else:
        mats = obj["matrices"] if isinstance(obj, dict) else obj
        value = mixed_discriminant([[[parse_fraction(x) for x in row] for row in m] for m in mats],
                                   limit=args.max_size)
    emit(args, format_fraction(value) + "\n")
    return EXIT_OK


def cmd_rsk(args: argparse.Namespace) -> int:
    obj = load_json(args.input)
    if "counts" in obj:
        diag = CorrelatedDiagram.from_counts(obj["counts"])
        p, q = rsk(diag)
        out = {"n": diag.n, "d": diag.d, "P": [list(r) for r in p], "Q": [list(r) for r in q]}
    else:
        diag = rsk_inverse(obj["P"], obj["Q"], int(obj["n"]), int(obj["d"]))
        out = {"n": diag.n, "d": diag.d, "counts": [list(r) for r in diag.counts]}
    emit(args, dump_json(out))
    return EXIT_OK


def cmd_dims(args: argparse.Namespace) -> int:
    report = experiments.dimension_report(args.n, args.d, exact=args.exact)
    if args.format == "json":
        emit(args, dump_json(report.to_json()))
    else:
        emit(args, experiments.dimension_csv([report]))
    return EXIT_OK


def _span_exit(report: experiments.SpanCheckReport) -> int:
    return EXIT_OK if report.verdict is experiments.Verdict.SPANS else EXIT_FAILS_TO_SPAN


def cmd_span_check(args: argparse.Namespace) -> int:
    report = experiments.span_check(args.n, args.d, guard_max_tableaux=args.guard_max_tableaux,
                                    max_basis=args.max_basis, seed=args.seed)
    emit(args, dump_json(report.to_json()))
    return _span_exit(report)


def cmd_strong_span_check(args: argparse.Namespace) -> int:
    report = experiments.strong_span_check(args.n, args.d, guard_max_tableaux=args.guard_max_tableaux,
                                           max_basis=args.max_basis, seed=args.seed)
    emit(args, dump_json(report.to_json()))
    return _span_exit(report)


def cmd_rewrite(args: argparse.Namespace) -> int:
    c = CorrelatedTableau.from_json(load_json(args.tableau))
    cert = rewriting.rewrite_simple_connected(c, max_labels=args.max_labels)
    emit(args, dump_json(cert.to_json()))
    return EXIT_OK


def cmd_verify_cert(args: argparse.Namespace) -> int:
    obj = load_json(args.certificate)
    try:
        cert = rewriting.RewriteCertificate.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed certificate: {exc}") from exc
    ok = rewriting.verify_certificate(cert)
    sys.stdout.write("valid\n" if ok else "invalid\n")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_audit(args: argparse.Namespace) -> int:
    report = experiments.decomposition_audit(args.n, args.d)
    emit(args, dump_json(report.to_json()))
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_sweep(args: argparse.Namespace) -> int:
    emit(args, experiments.sweep_csv(experiments.lower_bound_sweep(args.n_max)))
    return EXIT_OK


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semiq", description="Exact workbench for matrix semi-invariants.")
    parser.add_argument("--seed", type=int, default=0, help="seed for every randomized step (default 0)")
    parser.add_argument("--threads", type=_positive, default=None,
                        help="worker cap; computations run single-threaded and ignore larger values")
    parser.add_argument("--guard-max-tableaux", type=_positive, default=None,
                        help=f"exhaustive enumeration limit (env {experiments.GUARD_ENV}, default "
                             f"{experiments.DEFAULT_MAX_TABLEAUX})")
    parser.add_argument("--term-limit", type=_positive, default=DEFAULT_TERM_LIMIT,
                        help="expansion terms allowed per evaluated tableau")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func: Callable[[argparse.Namespace], int], help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    def nd(p: argparse.ArgumentParser) -> None:
        p.add_argument("-n", type=_positive, required=True)
        p.add_argument("-d", type=_positive, required=True)

    def out(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", "-o", help="output file (written atomically); stdout when omitted")

    p = add("straighten", cmd_straighten, "expand a monomial or expression in standard monomials")
    p.add_argument("input")
    p.add_argument("--pi", type=_positive, nargs=2, metavar=("J", "K"),
                   help="emit the single exchange pi_{J,K}(T) instead of the full expansion")
    out(p)
    p = add("canon", cmd_canon, "canonical form of an expression modulo ker(phi)")
    p.add_argument("input")
    out(p)
    p = add("eval", cmd_eval, "evaluate phi(expression) on a matrix tuple")
    p.add_argument("expr")
    p.add_argument("matrices")
    out(p)
    p = add("mdisc", cmd_mdisc, "mixed discriminant, or phi(C) through it with --tableau")
    p.add_argument("matrices")
    p.add_argument("--tableau")
    p.add_argument("--max-size", type=_positive, default=10)
    out(p)
    p = add("rsk", cmd_rsk, "RSK image of a diagram ({'counts': ...}) or its inverse ({'P','Q','n','d'})")
    p.add_argument("input")
    out(p)
    p = add("dims", cmd_dims, "dimension counts and spanning inequalities")
    nd(p)
    p.add_argument("--exact", action="store_true", help="count disconnected tableaux by enumeration")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    out(p)
    for name, func, text in (
            ("span-check", cmd_span_check, "rank of disconnected tableaux modulo ker(phi)"),
            ("strong-span-check", cmd_strong_span_check,
             "rank of disconnected and multi-edge tableaux modulo ker(phi)")):
        p = add(name, func, text)
        nd(p)
        p.add_argument("--max-basis", type=_positive, default=experiments.DEFAULT_MAX_BASIS)
        out(p)
    p = add("rewrite", cmd_rewrite, "certificate for a connected simple tableau")
    p.add_argument("--tableau", required=True)
    p.add_argument("--max-labels", type=_positive, default=rewriting.DEFAULT_MAX_LABELS)
    out(p)
    p = add("verify-cert", cmd_verify_cert, "check a rewrite certificate exactly")
    p.add_argument("certificate")
    p = add("audit", cmd_audit, "module decomposition and orthogonality audit")
    nd(p)
    out(p)
    p = add("sweep", cmd_sweep, "both sides of the counting inequality as CSV")
    p.add_argument("--n-max", type=int, required=True)
    out(p)
    return parser


GUARD_ERRORS = (experiments.GuardError, EvaluationLimitError, rewriting.RewriteGuardError, StraighteningError)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.guard_max_tableaux is None and experiments.GUARD_ENV in os.environ:
        try:
            experiments.max_tableaux_guard()
        except ValueError as exc:
            sys.stderr.write(f"invalid input: {exc}\n")
            return EXIT_INPUT
    try:
        return args.func(args)
    except GUARD_ERRORS as exc:
        sys.stderr.write(f"guard exceeded: {exc}\n")
        return EXIT_GUARD
    except (InputError, ValueError, KeyError, TypeError, IndexError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
