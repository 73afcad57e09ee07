"""Command-line front end.

Exit status: 0 success/verified, 1 verification failure, 2 usage, parse or
file errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

import yaml

from . import fedosov, quotient, scenarios, selftest
from .exprio import ParseError, parse_element, print_canonical
from .starproducts import Kind, StarConfig, hbar_to_lambda, lambda_to_hbar, star

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

BUILTIN_IDEALS = {
    "cross": scenarios.cross_ideal,
    "double_line": scenarios.double_line_ideal,
    "fat_circle": scenarios.fat_circle_ideal,
}


class UsageError(Exception):
    pass


def _emit(args, doc: dict, text: str):
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": args.command, **doc}
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        print(text)


def _expr(src, dim, param=None, order=None):
    return parse_element(src, dim, order=order, param=param)


def _load_ideal(path: str):
    p = Path(path)
    if not p.exists():
        stem = p.name.split(".")[0]
        if stem in BUILTIN_IDEALS and p.parent == Path("."):
            return BUILTIN_IDEALS[stem]()
    try:
        return quotient.load_ideal(p)
    except OSError as exc:
        raise UsageError(f"cannot read ideal file {path!r}: {exc.strerror or exc}") from exc
    except yaml.YAMLError as exc:
        raise UsageError(f"ideal file {path!r} is not valid YAML/JSON: {exc}") from exc


def _load_connection(path: str):
    try:
        return fedosov.load_connection(path)
    except OSError as exc:
        raise UsageError(f"cannot read connection file {path!r}: {exc.strerror or exc}") from exc
    except yaml.YAMLError as exc:
        raise UsageError(f"connection file {path!r} is not valid YAML/JSON: {exc}") from exc


# -- subcommands ------------------------------------------------------------


def cmd_star(args) -> int:
    kind = Kind.MOYAL_BASE if args.moyal else Kind.WEYL_FIBERWISE
    cfg = StarConfig(kind, sign=-1 if args.minus else 1)
    f = _expr(args.left, args.dim, cfg.param)
    g = _expr(args.right, args.dim, cfg.param)
    for src, e in ((args.left, f), (args.right, g)):
        if e.has_param() and e.param != cfg.param:
            raise UsageError(f"{src!r} uses {e.param}; the {kind.value} product is in {cfg.param}")
    out = star(cfg, f, g)
    if args.convert:
        out = lambda_to_hbar(out) if cfg.param == "lambda" else hbar_to_lambda(out)
    s = print_canonical(out)
    _emit(args, {"product": kind.value, "sign": cfg.sign, "result": s}, s)
    return EXIT_OK


def cmd_gamma(args) -> int:
    conn = _load_connection(args.connection)
    g = fedosov.gamma_recursion(conn, args.order)
    res = fedosov.flatness_residual(conn, g)
    s = print_canonical(g.value)
    ok = res.is_zero()
    _emit(
        args,
        {"order": args.order, "gamma": s, "flat": ok, "residual": print_canonical(res)},
        f"gamma = {s}\nflatness residual (through degree {args.order - 1}): {print_canonical(res)}",
    )
    return EXIT_OK if ok else EXIT_FAIL


def cmd_lift(args) -> int:
    conn = _load_connection(args.connection)
    g = fedosov.gamma_recursion(conn, args.order)
    a00 = _expr(args.expr, conn.dim, "hbar")
    sec = fedosov.flat_lift(conn, g, a00)
    res = fedosov.d_residual(conn, g, sec)
    s = print_canonical(sec.value)
    ok = res.is_zero()
    _emit(
        args,
        {"order": args.order, "section": s, "flat": ok, "residual": print_canonical(res)},
        f"a = {s}\nD-residual (through degree {args.order - 1}): {print_canonical(res)}",
    )
    return EXIT_OK if ok else EXIT_FAIL


def cmd_basestar(args) -> int:
    conn = _load_connection(args.connection)
    g = fedosov.gamma_recursion(conn, args.order)
    f = _expr(args.left, conn.dim, "hbar")
    h = _expr(args.right, conn.dim, "hbar")
    s = print_canonical(fedosov.base_star(conn, g, f, h))
    _emit(args, {"order": args.order, "result": s}, s)
    return EXIT_OK


def cmd_normalizer(args) -> int:
    ideal = _load_ideal(args.ideal)
    g = _expr(args.expr, ideal.dim, "lambda")
    if g.has_param() and g.param != "lambda":
        raise UsageError("normalizer expressions use lambda")
    res = quotient.normalizer_residual(ideal, g)
    ok = all(r.is_zero for r in res)
    verdict = "IN-NORMALIZER" if ok else "NOT-IN-NORMALIZER"
    lines = [verdict]
    for phi, r in zip(ideal.generators, res):
        lines.append(f"  {print_canonical(phi)} * h: residual {r}")
    _emit(
        args,
        {
            "verdict": verdict,
            "residuals": [
                {"generator": print_canonical(phi), "residual": str(r), "zero": r.is_zero}
                for phi, r in zip(ideal.generators, res)
            ],
        },
        "\n".join(lines),
    )
    return EXIT_OK if ok else EXIT_FAIL


def cmd_solve(args) -> int:
    ideal = _load_ideal(args.ideal)
    box = quotient.AnsatzSpace.box(ideal.dim, args.max_degree, args.lambda_cap)
    basis = [print_canonical(e) for e in quotient.normalizer_solve(ideal, box)]
    slice_dim = len(quotient.ideal_slice(ideal, box))
    text = [f"{len(basis)} basis elements ({len(box)} ansatz monomials, ideal slice dimension {slice_dim})"]
    text += [f"  {b}" for b in basis]
    _emit(
        args,
        {"ansatz_size": len(box), "ideal_slice_dimension": slice_dim, "basis": basis},
        "\n".join(text),
    )
    return EXIT_OK


def cmd_scenario(args) -> int:
    try:
        reports = scenarios.run(args.name, args.seed)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    ok = all(r.passed for r in reports)
    if args.format == "json":
        _emit(args, {"passed": ok, "reports": [r.to_dict() for r in reports]}, "")
    else:
        print("\n\n".join(r.to_text() for r in reports))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    results = selftest.run_all(args.seed, args.cases)
    ok = all(r.passed for r in results)
    lines = [
        f"[{'pass' if r.passed else 'FAIL'}] {r.name}: {r.cases - r.failures}/{r.cases}"
        + (f" (witness {r.witness})" if r.witness else "")
        for r in results
    ]
    _emit(
        args,
        {
            "passed": ok,
            "seed": args.seed,
            "suites": [
                {"name": r.name, "cases": r.cases, "failures": r.failures, "witness": r.witness}
                for r in results
            ],
        },
        "\n".join(lines),
    )
    return EXIT_OK if ok else EXIT_FAIL


# -- parser -----------------------------------------------------------------


def _nonneg(v):
    n = int(v)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _positive(v):
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _common(top: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global options; their defaults are suppressed so
    # a value given before the subcommand survives
    def d(value):
        return value if top else argparse.SUPPRESS

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=d("text"))
    common.add_argument("--dim", type=_positive, default=d(2), help="base dimension (default 2)")
    common.add_argument("--order", type=_nonneg, default=d(6), help="truncation order (default 6)")
    common.add_argument("--seed", type=_nonneg, default=d(scenarios.DEFAULT_SEED))
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common(top=False)
    parser = argparse.ArgumentParser(
        prog="singular-dq",
        description="Exact deformation quantization of singular spaces.",
        parents=[_common(top=True)],
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("star", parents=[common], help="star product of two expressions")
    which = p.add_mutually_exclusive_group()
    which.add_argument("--moyal", action="store_true", help="Moyal product in lambda")
    which.add_argument("--weyl", action="store_true", help="fiberwise Weyl product in hbar (default)")
    p.add_argument("--minus", action="store_true", help="use the parameter with opposite sign")
    p.add_argument("--convert", action="store_true", help="rewrite the result via lambda = -(i/2) hbar")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("gamma", parents=[common], help="solve for gamma")
    p.add_argument("connection")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("lift", parents=[common], help="flat section over a base function")
    p.add_argument("connection")
    p.add_argument("expr")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("basestar", parents=[common], help="induced product of two base functions")
    p.add_argument("connection")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_basestar)

    p = sub.add_parser("normalizer", parents=[common], help="normalizer membership test")
    p.add_argument("ideal")
    p.add_argument("expr")
    p.set_defaults(func=cmd_normalizer)

    p = sub.add_parser("solve", parents=[common], help="normalizer basis inside an ansatz box")
    p.add_argument("ideal")
    p.add_argument("--max-degree", type=_nonneg, default=3)
    p.add_argument("--lambda-cap", type=_nonneg, default=1)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("scenario", parents=[common], help="run a worked example report")
    p.add_argument("name", help="cross, double_line, double_point, fat_circle or all")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("selftest", parents=[common], help="randomized invariant suites")
    p.add_argument("--cases", type=_positive, default=20)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "order", 6) < 2 and args.command in ("gamma", "lift", "basestar"):
        print("error: --order must be >= 2 for the Fedosov commands", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except quotient.NotInNormalizer as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
