"""Command line interface: ``wordint <subcommand> [words...]``.

Exit codes: 0 success, 1 a reproduction row failed, 2 parse or usage error,
3 a size cap or budget was exceeded, 4 an internal consistency check failed.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import integrals, montecarlo, weingarten
from .exactalg import (LaurentSeries, Polynomial, RationalFunction, format_factored,
                       laurent_at_infinity)
from .freegroup import WordParseError, IdentityWordError, limit_counting, parse_tuple, render
from .matchings import MatchingCapError, partitions
from .surfaces import GluingError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_INTERNAL = 4


@dataclass(frozen=True)
class Config:
    cache_dir: str | None = None
    k_cap: int = weingarten.DEFAULT_K_CAP
    laurent_depth: int = integrals.DEFAULT_DEPTH
    samples: int = 100_000
    seed: int = 20240101

    def __post_init__(self):
        if not 1 <= self.k_cap <= weingarten.EXTENDED_K_CAP:
            raise ValueError(f"k_cap must lie in 1..{weingarten.EXTENDED_K_CAP}")
        if self.laurent_depth < 1 or self.samples < 100:
            raise ValueError("laurent_depth must be positive and samples at least 100")


_INT_KEYS = ("k_cap", "laurent_depth", "samples", "seed")


def load_config(path: str | None) -> Config:
    """Read a flat ``key = value`` file; unknown keys are rejected."""
    if path is None:
        return Config()
    parser = configparser.ConfigParser()
    parser.read_string("[wordint]\n" + Path(path).read_text())
    values: dict = {}
    for key, raw in parser["wordint"].items():
        if key in _INT_KEYS:
            values[key] = int(raw)
        elif key == "cache_dir":
            values[key] = raw
        else:
            raise ValueError(f"unknown config key {key!r}")
    return Config(**values)


def _apply_overrides(cfg: Config, args: argparse.Namespace) -> Config:
    changes = {}
    for key in ("cache_dir", "k_cap", "laurent_depth", "samples", "seed"):
        value = getattr(args, key, None)
        if value is not None:
            changes[key] = value
    return replace(cfg, **changes)


# ---------------------------------------------------------------------------
# Reference values: exact integrals over O(n) and their chi_max


def _rf(num: Sequence[int], den_roots: Sequence[int], scale: int = 1) -> RationalFunction:
    return RationalFunction(Polynomial(num) * scale, Polynomial.from_roots(den_roots))


REFERENCE_TABLE = [
    (("aabb",), _rf([1], [0]), -1),
    (("aaaabbbb",), _rf([1], [0]), -1),
    (("[a,b]^2",), _rf([-4, -2, 1, 1], [0, -2, 1]), 0),
    (("abbbAB",), RationalFunction(0), -2),
    (("abbbbABB",), _rf([1], [0]), -1),
    (("abaabaaabb",), _rf([2, 3], [0, -2, 1]), -2),
    (("aabb", "aabb"), _rf([4, 2, 1, 1], [0, -2, 1]), 0),
    (("aab", "aab"), _rf([1], []), 0),
    (("aabb", "aabb", "aabb"), _rf([16, 6, -2, 3, 1], [2, 1, 0, -2, -4], 3), -1),
]


# ---------------------------------------------------------------------------
# Output helpers


def _emit(args: argparse.Namespace, doc: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _fmt_chi(chi) -> str:
    return "-inf" if chi == -math.inf else str(chi)


def _json_number(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _series_lines(series: LaurentSeries) -> list[str]:
    coeffs = ",".join(str(c) for c in series.coefficients)
    low = series.truncation_exponent + 1
    return [coeffs, f"exponents {series.top_exponent}..{low} in powers of (n - {series.center_shift})"]


# ---------------------------------------------------------------------------
# Subcommands


def cmd_exact(args: argparse.Namespace, cfg: Config) -> int:
    words = parse_tuple(args.words)
    if args.group == "O":
        result = integrals.exact_trace_o(words, cfg.laurent_depth, cfg.k_cap)
    else:
        result = integrals.exact_trace_sp(words, args.method, cfg.laurent_depth, cfg.k_cap)
    doc = result.to_json()
    doc["display"] = format_factored(result.exact)
    _emit(args, doc, [format_factored(result.exact), f"N = {result.validity_threshold}",
                      f"chi_max = {_fmt_chi(result.chi_max)}"])
    return EXIT_OK


def cmd_laurent(args: argparse.Namespace, cfg: Config) -> int:
    words = parse_tuple(args.words)
    depth = args.depth or cfg.laurent_depth
    if args.center == "sp":
        f = integrals.exact_trace_sp_duality(words, cfg.k_cap)
        series = laurent_at_infinity(f, Fraction(-1, 2), depth)
    elif args.center == "1":
        series = integrals.shifted_coefficients(words, depth, cfg.k_cap)
    else:
        f = integrals.exact_trace_o_function(words, cfg.k_cap)
        series = laurent_at_infinity(f, 0, depth)
        if args.diagram:
            low = series.truncation_exponent + 1
            if low > 0:
                low = 0
            diagram = integrals.first_laurent_truncated(words, low, cfg.k_cap)
            exact = laurent_at_infinity(f, 0, low_exponent=low)
            if any(diagram.coefficient(e) != exact.coefficient(e) for e in range(0, low - 1, -1)):
                print("diagrammatic expansion disagrees with the exact one", file=sys.stderr)
                return EXIT_INTERNAL
    _emit(args, series.to_json(), _series_lines(series))
    return EXIT_OK


def cmd_chimax(args: argparse.Namespace, cfg: Config) -> int:
    words = parse_tuple(args.words)
    chi = integrals.chi_max(words, cfg.k_cap)
    doc: dict = {"words": [render(w) for w in words], "chi_max": _json_number(chi)}
    lines = [f"chi_max = {_fmt_chi(chi)}"]
    if len(words) == 1:
        b = integrals.sql_cl_bounds(words[0])
        doc.update(min_combined=_json_number(b.min_combined), sql_bound=_json_number(b.sql_bound),
                   cl_bound=_json_number(b.cl_bound))
        lines.append(f"1 - chi_max = {b.min_combined}  sql <= {b.sql_bound}  cl <= {b.cl_bound}")
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_limit(args: argparse.Namespace, cfg: Config) -> int:
    words = parse_tuple(args.words)
    count = limit_counting(words)
    doc: dict = {"words": [render(w) for w in words], "limit_counting": count}
    lines = [f"limit (counting) = {count}"]
    try:
        constant = integrals.constant_coefficient(integrals.exact_trace_o_function(words, cfg.k_cap))
    except (integrals.IntegralCapError, MatchingCapError):
        lines.append("exact value not computed: size cap exceeded")
        _emit(args, doc, lines)
        return EXIT_OK
    doc["constant_coefficient"] = str(constant)
    doc["match"] = constant == count
    lines.append(f"limit (exact)    = {constant}  {'PASS' if constant == count else 'FAIL'}")
    _emit(args, doc, lines)
    return EXIT_OK if constant == count else EXIT_INTERNAL


def cmd_duality(args: argparse.Namespace, cfg: Config) -> int:
    words = parse_tuple(args.words)
    report = integrals.duality_check(words, cfg.k_cap)
    doc = {"words": [render(w) for w in words], "holds": report.holds,
           "difference": report.difference.to_json()}
    _emit(args, doc, ["PASS" if report.holds else f"FAIL: difference {report.difference}"])
    return EXIT_OK if report.holds else EXIT_INTERNAL


def cmd_mc(args: argparse.Namespace, cfg: Config) -> int:
    words = parse_tuple(args.words)
    spec = montecarlo.SampleSpec(args.group, args.n, cfg.samples, cfg.seed)
    if args.group == "O":
        exact = integrals.exact_trace_o_function(words, cfg.k_cap)(args.n)
    else:
        exact = integrals.exact_trace_sp_duality(words, cfg.k_cap)(args.n)
    report = montecarlo.estimate(words, spec, exact, workers=args.workers)
    doc = report.to_json()
    doc["words"] = [render(w) for w in words]
    _emit(args, doc, [montecarlo.describe(words, report),
                      "PASS" if report.passes() else f"FAIL: |z| >= {montecarlo.Z_THRESHOLD}"])
    return EXIT_OK if report.passes() else EXIT_FAIL


def cmd_wg(args: argparse.Namespace, cfg: Config) -> int:
    extended = args.k > weingarten.DEFAULT_K_CAP and cfg.k_cap >= args.k
    table = (weingarten.wg_o if args.group == "O" else weingarten.wg_sp)(args.k, allow_extended=extended)
    doc = table.to_json()
    lines = [f"Wg^{args.group}_{args.k} by coset type"
             + (" (times sign(sigma_m1) sign(sigma_m2))" if args.group == "Sp" else "")]
    for t in partitions(args.k):
        lines.append(f"  {list(t)}: {format_factored(table.by_type(t))}")
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_table(args: argparse.Namespace, cfg: Config) -> int:
    rows = []
    lines = []
    all_ok = True
    for texts, expected, expected_chi in REFERENCE_TABLE:
        words = parse_tuple(texts)
        f = integrals.exact_trace_o_function(words, cfg.k_cap)
        chi = integrals.chi_max(words, cfg.k_cap)
        limit = limit_counting(words)
        constant = integrals.constant_coefficient(f)
        ok = f == expected and chi == expected_chi and constant == limit
        all_ok &= ok
        label = ", ".join(texts)
        rows.append({"words": list(texts), "exact": format_factored(f), "expected": format_factored(expected),
                     "chi_max": chi, "expected_chi_max": expected_chi, "limit": limit,
                     "constant_coefficient": str(constant), "pass": ok})
        lines.append(f"{'PASS' if ok else 'FAIL'}  {label:<24} {format_factored(f):<60} "
                     f"chi_max={chi:<3} limit={limit}")
    passed = sum(r["pass"] for r in rows)
    lines.append(f"{passed}/{len(rows)} PASS")
    _emit(args, {"rows": rows, "passed": passed, "total": len(rows)}, lines)
    return EXIT_OK if all_ok else EXIT_FAIL


def cmd_cache(args: argparse.Namespace, cfg: Config) -> int:
    if args.action == "info":
        info = weingarten.cache_info()
        _emit(args, info, [f"cache directory: {info['cache_dir']}"] + [f"  {f}" for f in info["files"]])
    else:
        removed = weingarten.clear_cache()
        _emit(args, {"removed": removed}, [f"removed {removed} file(s)"])
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON document")
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--cache-dir", dest="cache_dir", help="Weingarten cache directory")
    common.add_argument("--k-cap", dest="k_cap", type=int, help="largest allowed L_x (default 4, at most 5)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="wordint", description="Exact and sampled trace integrals of words "
                                     "over orthogonal and symplectic groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", parents=[common], help="exact rational function")
    p.add_argument("words", nargs="+")
    p.add_argument("--group", choices=("O", "Sp"), default="O")
    p.add_argument("--method", choices=("direct", "duality"), default="direct",
                   help="symplectic method (Sp only)")
    p.add_argument("--depth", dest="laurent_depth", type=int)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("laurent", parents=[common], help="expansion at infinity")
    p.add_argument("words", nargs="+")
    p.add_argument("--center", choices=("0", "1", "sp"), default="0")
    p.add_argument("--depth", type=int)
    p.add_argument("--diagram", action="store_true",
                   help="also check the center-0 coefficients against the matching-system expansion")
    p.set_defaults(func=cmd_laurent)

    p = sub.add_parser("chimax", parents=[common], help="largest Euler characteristic")
    p.add_argument("words", nargs="+")
    p.set_defaults(func=cmd_chimax)

    p = sub.add_parser("limit", parents=[common], help="limit as n grows")
    p.add_argument("words", nargs="+")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("duality", parents=[common], help="check the O/Sp duality")
    p.add_argument("words", nargs="+")
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("mc", parents=[common], help="Monte Carlo estimate")
    p.add_argument("words", nargs="+")
    p.add_argument("--group", choices=("O", "Sp"), default="O")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("wg", parents=[common], help="Weingarten table")
    p.add_argument("k", type=int)
    p.add_argument("--group", choices=("O", "Sp"), default="O")
    p.set_defaults(func=cmd_wg)

    p = sub.add_parser("table", parents=[common], help="reproduce the reference table")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("cache", parents=[common], help="inspect or clear the Weingarten cache")
    p.add_argument("action", choices=("info", "clear"))
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _apply_overrides(load_config(args.config), args)
    except (OSError, ValueError, configparser.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if cfg.cache_dir:
        os.environ["WORDINT_CACHE"] = cfg.cache_dir
    try:
        return args.func(args, cfg)
    except (WordParseError, IdentityWordError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (integrals.IntegralCapError, MatchingCapError, integrals.BudgetError) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (integrals.MethodDisagreementError, GluingError, ArithmeticError, montecarlo.MembershipError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
