"""Command-line entry point.

Exit codes: 0 success, 1 a mathematical check failed, 2 capacity or search
bound reached, 64 usage or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from . import density, suites, verifier, witness
from .tower import TowerError, approximate

EXIT_OK, EXIT_FAIL, EXIT_CAPACITY, EXIT_USAGE = 0, 1, 2, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    format: str = "text"
    seed: int = 0
    depth_limit: int = witness.DEFAULT_DEPTH_LIMIT
    trial_count: int = 1000


def _rational(text: str) -> mpq:
    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    return mpq(f.numerator, f.denominator)


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _positive(text: str) -> int:
    n = _nonneg(text)
    if n == 0:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _emit(text: str, out=None):
    stream = out or sys.stdout
    stream.write(text if text.endswith("\n") else text + "\n")


def _json(obj) -> str:
    return json.dumps(obj, indent=1)


# -- subcommands -----------------------------------------------------------

def cmd_build(k: int, l: int, fmt: str = "text", depth_limit: int | None = None) -> int:
    word = witness.from_kl(k, l)
    try:
        s = witness.build_canonical(word, depth_limit)
    except witness.CapacityError as e:
        print(f"capacity: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    st = witness.stats(s)
    print(" ".join(f"{key}={val}" for key, val in st.items()), file=sys.stderr)
    if fmt == "json":
        _emit(witness.dumps(s))
    elif fmt == "dot":
        _emit(witness.to_dot(s))
    elif fmt == "svg":
        _emit(witness.to_svg(s))
    else:
        lines = [f"word {s.word}", f"tower radicands: {[repr(r) for r in s.tower.radicands]}"]
        lines += [f"{key}: {val}" for key, val in st.items()]
        lines.append(f"endpoints: {s.endpoints[0]} {s.endpoints[1]}")
        _emit("\n".join(lines))
    return EXIT_OK


def cmd_identities(selector: str, fmt: str = "text") -> int:
    if selector == "all":
        names = list(suites.IDENTITY_NAMES.values())
    else:
        names = [suites.IDENTITY_NAMES.get(selector, selector)]
    reports = [suites.run_identity(n) for n in names]
    if fmt == "json":
        _emit(_json([{"name": r.name, "factored": r.label, "ok": r.ok,
                      "samples": [{"polynomial": repr(p), "ok": ok} for _, p, ok in r.results]}
                     for r in reports]))
    else:
        for r in reports:
            _emit(f"{r.name}: {r.label} {'PASS' if r.ok else 'FAIL'}")
            for _, p, ok in r.results:
                _emit(f"  {p!r}  {'ok' if ok else 'MISMATCH'}")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


PROPS = ("1", "2", "3a", "3b", "4")


def cmd_props(selector: str, trials: int, seed: int, fmt: str = "text") -> int:
    props = PROPS if selector == "all" else (selector,)
    reports = [suites.run_props(p, trials, seed) for p in props]
    if fmt == "json":
        _emit(_json([{"prop": r.prop, "trials": r.trials, "seed": r.seed, "passed": r.passed,
                      "ok": r.ok, "counterexample": r.counterexample} for r in reports]))
    else:
        for r in reports:
            _emit(f"prop {r.prop}: {r.passed}/{r.trials} {'PASS' if r.ok else 'FAIL'}")
            if r.counterexample is not None:
                _emit("  counterexample: " + json.dumps(r.counterexample))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def cmd_verify(set_path: str, map_path: str, fmt: str = "text") -> int:
    try:
        s = witness.from_json(_load(set_path))
        f = verifier.point_map_from_json(_load(map_path))
        report = verifier.check_map(s, f)
    except (OSError, ValueError, KeyError, TypeError, TowerError) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_USAGE
    if fmt == "json":
        _emit(_json(verifier.report_to_json(report)))
    else:
        bad = report.failures()
        _emit(f"unit pairs preserved: {report.unit_ok}")
        _emit(f"endpoint preserved: {report.endpoint_match}")
        _emit(f"mismatched pairs: {len(bad)} of {len(report.pair_results)}")
        for r in bad[:20]:
            _emit(f"  {r.role} {r.a} {r.b}: declared {r.declared!r}, got {r.computed!r}")
        _emit(f"consistent: {report.theorem_consistent}")
    return EXIT_OK if report.theorem_consistent else EXIT_FAIL


def cmd_approx(target, eps, max_exp: int, fmt: str = "text") -> int:
    try:
        res = density.approximate_distance(target, eps, max_exp)
    except density.SearchExhaustedError as e:
        print(f"search exhausted: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    if fmt == "json":
        _emit(_json(res.to_json()))
    else:
        lo, hi = approximate(res.value_exact, 12)
        _emit(f"k = {res.k}\nl = {res.l}\nvalue = {float((lo + hi) / 2):.12f}\n"
              f"error <= {res.error_bound} (~{float(res.error_bound):.6g})")
    return EXIT_OK


# -- argument parsing ----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="unitwitness", description="Exact witness sets for unit-distance rigidity.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def fmt(sp, choices=("text", "json")):
        sp.add_argument("--format", choices=choices, default="text")

    b = sub.add_parser("build", help="build the canonical witness set for (k, l)")
    b.add_argument("--k", type=_nonneg, required=True)
    b.add_argument("--l", type=_nonneg, required=True)
    b.add_argument("--depth-limit", type=_nonneg, default=None,
                   help=f"default from ${witness.DEPTH_ENV} or {witness.DEFAULT_DEPTH_LIMIT}")
    fmt(b, ("text", "json", "dot", "svg"))

    i = sub.add_parser("identities", help="check the four determinant factorizations")
    i.add_argument("--lemma", default="all",
                   choices=[*suites.IDENTITY_NAMES, *suites.IDENTITY_NAMES.values(), "all"])
    fmt(i)

    pr = sub.add_parser("props", help="randomized property suites")
    pr.add_argument("--prop", default="all", choices=[*PROPS, "all"])
    pr.add_argument("--trials", type=_positive, default=1000)
    pr.add_argument("--seed", type=int, default=0)
    fmt(pr)

    v = sub.add_parser("verify", help="check a point map against a witness set")
    v.add_argument("--set", dest="set_path", required=True)
    v.add_argument("--map", dest="map_path", required=True)
    fmt(v)

    a = sub.add_parser("approx", help="approximate a target by (2 sqrt2/3)^k sqrt3^l")
    a.add_argument("--target", type=_rational, required=True)
    a.add_argument("--eps", type=_rational, required=True)
    a.add_argument("--max-exp", type=_nonneg, default=40)
    fmt(a)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "build":
        return cmd_build(args.k, args.l, args.format, args.depth_limit)
    if args.subcommand == "identities":
        return cmd_identities(args.lemma, args.format)
    if args.subcommand == "props":
        return cmd_props(args.prop, args.trials, args.seed, args.format)
    if args.subcommand == "verify":
        return cmd_verify(args.set_path, args.map_path, args.format)
    if args.subcommand == "approx":
        if args.target <= 0 or args.eps <= 0:
            parser.error("--target and --eps must be positive")
        return cmd_approx(args.target, args.eps, args.max_exp, args.format)
    parser.error(f"unknown subcommand {args.subcommand}")


if __name__ == "__main__":
    sys.exit(main())
