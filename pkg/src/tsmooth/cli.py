"""Command-line front end.

Subcommands:
  invariants   invariants of one germ, as JSON
  check        evaluate a problem file, criterion report as JSON
  sweep        walk integer axes over a base problem, rows as CSV (or JSON)
  table        catalog closed forms for a family at chosen alpha values

Exit codes: ``invariants`` returns 0 on success, 2 on invalid input and 3
when a colength is not finite (non-reduced germ).  ``check`` returns 0 when
the verdict is TSMOOTH_OR_EMPTY, 1 for INCONCLUSIVE and 2 for
HYPOTHESES_FAIL or invalid input, so shell pipelines can filter on the
verdict trichotomy.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from .invariants import (
    ANALYTIC,
    TOPOLOGICAL,
    GermInputError,
    GermSpec,
    NonReducedGermError,
    SearchBudget,
    catalog_invariants,
    invariants_of,
    parse_alpha,
)
from .jets import PolynomialSyntaxError, jet_for_germ, make_jet
from .local_algebra import NotFiniteColengthError
from .reports import (
    ProblemFileError,
    canonical_json,
    frac_str,
    load_problem,
    load_sweep,
    meta,
    record_to_dict,
    report_to_dict,
    run_problem,
    run_sweep,
    sweep_header,
)

EXIT_OK = 0
EXIT_INCONCLUSIVE = 1
EXIT_INVALID = 2
EXIT_NOT_FINITE = 3

DEFAULT_ALPHAS = (Fraction(0), Fraction(1, 2), Fraction(1))


def _write_text(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _germ_from_args(args) -> GermSpec:
    if args.poly is not None and args.type is not None:
        raise GermInputError("give either --poly or --type, not both")
    if args.poly is not None:
        equivalence = args.equivalence or ANALYTIC
        if args.truncation:
            poly = make_jet(args.poly, args.truncation)
        else:
            poly = jet_for_germ(args.poly)
        return GermSpec.explicit(poly, equivalence)
    if args.type is None:
        raise GermInputError("one of --poly or --type is required")
    index = args.m if args.type == "M" else args.k
    if index is None:
        index = args.k if args.k is not None else args.m
    if index is None:
        raise GermInputError(f"--type {args.type} needs an index (--k or --m)")
    equivalence = args.equivalence or TOPOLOGICAL
    return GermSpec.catalog(args.type, index, equivalence)


def cmd_invariants(args) -> int:
    try:
        spec = _germ_from_args(args)
        alphas = tuple(parse_alpha(a) for a in args.alpha) or DEFAULT_ALPHAS
        budget = SearchBudget(max_candidates=args.budget)
        record = invariants_of(spec, alphas, budget)
    except NonReducedGermError as exc:
        return _fail(str(exc), EXIT_NOT_FINITE)
    except NotFiniteColengthError as exc:
        return _fail(str(exc), EXIT_NOT_FINITE)
    except (GermInputError, PolynomialSyntaxError, ValueError) as exc:
        return _fail(str(exc), EXIT_INVALID)
    _write_text(canonical_json(record_to_dict(record)), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        problem = load_problem(args.problem)
        report = run_problem(problem)
    except (ProblemFileError, GermInputError, PolynomialSyntaxError) as exc:
        return _fail(str(exc), EXIT_INVALID)
    except (NonReducedGermError, NotFiniteColengthError) as exc:
        return _fail(str(exc), EXIT_INVALID)
    except OSError as exc:
        return _fail(str(exc), EXIT_INVALID)
    extra = {}
    if problem.alphas:
        seen = []
        appendix = []
        for spec, _count in problem.singularities:
            if spec in seen:
                continue
            seen.append(spec)
            record = invariants_of(spec, problem.alphas, problem.budget)
            appendix.append(record_to_dict(record))
        for entry in appendix:
            entry.pop("meta", None)
        extra["invariants"] = appendix
    _write_text(canonical_json(report_to_dict(report, extra)), args.out)
    if report.verdict == "TSMOOTH_OR_EMPTY":
        return EXIT_OK
    if report.verdict == "INCONCLUSIVE":
        return EXIT_INCONCLUSIVE
    return EXIT_INVALID


def cmd_sweep(args) -> int:
    try:
        spec = load_sweep(args.sweep)
        header = sweep_header(spec)
        rows = list(run_sweep(spec))
    except (ProblemFileError, GermInputError, PolynomialSyntaxError) as exc:
        return _fail(str(exc), EXIT_INVALID)
    except (NonReducedGermError, NotFiniteColengthError) as exc:
        return _fail(str(exc), EXIT_INVALID)
    except OSError as exc:
        return _fail(str(exc), EXIT_INVALID)
    try:
        if args.format == "json":
            payload = {
                "meta": meta(),
                "header": header,
                "rows": rows,
            }
            _write_text(canonical_json(payload), args.out)
        else:
            import io

            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
            _write_text(buffer.getvalue(), args.out)
    except OSError as exc:
        return _fail(str(exc), EXIT_INVALID)
    return EXIT_OK


_TABLE_RANGES = {"A": (1, 10), "D": (4, 12), "E": (6, 8), "M": (2, 8)}


def cmd_table(args) -> int:
    family = args.family
    lo, hi = _TABLE_RANGES[family]
    lo = args.min if args.min is not None else lo
    hi = args.max if args.max is not None else hi
    try:
        alphas = tuple(parse_alpha(a) for a in args.alpha) or DEFAULT_ALPHAS
        equivalence = args.equivalence or TOPOLOGICAL
        rows = []
        for index in range(lo, hi + 1):
            spec = GermSpec.catalog(family, index, equivalence)
            record = catalog_invariants(spec, alphas)
            row = {
                "type": spec.label(),
                "tau": record.tau,
                "tau_ci": record.tau_ci,
                "gamma": {
                    frac_str(a): (
                        None
                        if record.gamma[a].value is None
                        else frac_str(record.gamma[a].value)
                    )
                    for a in alphas
                },
            }
            rows.append(row)
    except GermInputError as exc:
        return _fail(str(exc), EXIT_INVALID)
    if args.format == "json":
        _write_text(canonical_json({"meta": meta(), "rows": rows}), args.out)
        return EXIT_OK
    if args.format == "csv":
        import io

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        alpha_names = [frac_str(a) for a in alphas]
        writer.writerow(["type", "tau", "tau_ci"] + [f"gamma({a})" for a in alpha_names])
        for row in rows:
            writer.writerow(
                [row["type"], row["tau"], row["tau_ci"]]
                + [row["gamma"][a] if row["gamma"][a] is not None else "" for a in alpha_names]
            )
        _write_text(buffer.getvalue(), args.out)
        return EXIT_OK
    alpha_names = [frac_str(a) for a in alphas]
    widths = [10, 6, 8] + [12] * len(alpha_names)
    header = ["type", "tau", "tau_ci"] + [f"gamma({a})" for a in alpha_names]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    for row in rows:
        cells = [row["type"], str(row["tau"]), str(row["tau_ci"])]
        cells += [
            row["gamma"][a] if row["gamma"][a] is not None else "unavailable"
            for a in alpha_names
        ]
        lines.append("  ".join(c.ljust(w) for c, w in zip(cells, widths)))
    _write_text("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsmooth",
        description=(
            "Exact singularity invariants and T-smoothness criterion checks "
            "for equisingular families of curves"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_inv = sub.add_parser("invariants", help="invariants of one germ (JSON)")
    p_inv.add_argument("--type", choices=("A", "D", "E", "M"))
    p_inv.add_argument("--k", type=int, help="index for A/D/E types")
    p_inv.add_argument("--m", type=int, help="index for M types")
    p_inv.add_argument("--poly", help="explicit germ, e.g. 'y^2 - x^3'")
    p_inv.add_argument("--truncation", type=int, help="jet truncation degree")
    p_inv.add_argument(
        "--equivalence", choices=(TOPOLOGICAL, ANALYTIC), default=None
    )
    p_inv.add_argument(
        "--alpha", action="append", default=[], help="rational in [0,1], repeatable"
    )
    p_inv.add_argument("--budget", type=int, default=400)
    p_inv.add_argument("--out", help="write to a file instead of stdout")
    p_inv.set_defaults(func=cmd_invariants)

    p_check = sub.add_parser("check", help="evaluate a problem file (JSON report)")
    p_check.add_argument("problem", help="path to a problem JSON file")
    p_check.add_argument("--out", help="write to a file instead of stdout")
    p_check.set_defaults(func=cmd_check)

    p_sweep = sub.add_parser("sweep", help="evaluate a sweep file (CSV rows)")
    p_sweep.add_argument("sweep", help="path to a sweep JSON file")
    p_sweep.add_argument("--out", help="write to a file instead of stdout")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.set_defaults(func=cmd_sweep)

    p_table = sub.add_parser("table", help="catalog closed forms for a family")
    p_table.add_argument("--family", choices=("A", "D", "E", "M"), required=True)
    p_table.add_argument("--min", type=int)
    p_table.add_argument("--max", type=int)
    p_table.add_argument(
        "--alpha", action="append", default=[], help="rational in [0,1], repeatable"
    )
    p_table.add_argument(
        "--equivalence", choices=(TOPOLOGICAL, ANALYTIC), default=None
    )
    p_table.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p_table.add_argument("--out", help="write to a file instead of stdout")
    p_table.set_defaults(func=cmd_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
