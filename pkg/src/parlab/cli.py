"""Batch command-line front-end.

Builds problem instances, runs PAR analyses and verification sweeps,
renders tilings, and emits JSON/CSV for downstream plotting.  Exit
status: 0 on success, 2 when a verification check fails, 1 on usage
errors (including cap violations and malformed input files).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .exact import QSqrt2
from .formulas import (
    Check,
    PAR_SCOPES,
    asymptote_par,
    brute_force_pars,
    closed_form_par,
    cross_check,
    has_asymptote,
)
from .matrix import CapExceededError, Partition, Rectangle, ValueMatrix
from .par import (
    Distribution,
    DistributionError,
    GFunction,
    GVariant,
    ParReport,
    avg_par,
    avg_par_uniform,
    decimal_str,
    g_par,
    optimal_avg_objective_par,
    prob_mass_counterexample,
    subjective_ratio,
    worst_case_par,
)
from .problems import (
    ProblemKind,
    ProtocolKind,
    build_matrix,
    build_protocol,
    certify_fooling_set,
    fooling_set,
    recursive_tiling,
)
from .protocol import induced_tiles, is_inducible, tiling_from_tiles


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments; the contract here
    # reserves 2 for verification failures, so remap to 1
    def error(self, message: str):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _k_range(text: str) -> list[int]:
    """Accept a single k or an inclusive lo..hi range."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad k spec {text!r}") from exc
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad k spec {text!r}")
    return list(range(lo, hi + 1))


def load_distribution_csv(path: str, n_rows: int, n_cols: int) -> Distribution:
    """Load an explicit distribution from CSV columns row,col,num,den.
    Unlisted cells get weight 0; the weights must sum to exactly 1."""
    weights = {}
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            cell = (int(rec["row"]), int(rec["col"]))
            if not (0 <= cell[0] < n_rows and 0 <= cell[1] < n_cols):
                raise DistributionError(f"cell {cell} out of range")
            weights[cell] = Fraction(int(rec["num"]), int(rec["den"]))
    return Distribution.explicit(n_rows, n_cols, weights)


# -- rendering ---------------------------------------------------------------


def _num_str(x) -> str:
    if isinstance(x, QSqrt2):
        if x.is_rational:
            x = x.rational()
        else:
            return str(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _emit(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        if not rows:
            return
        writer = csv.DictWriter(out, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    else:  # ascii
        if not rows:
            return
        cols = list(rows[0])
        table = [cols] + [[str(r.get(c, "")) for c in cols] for r in rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(cols))]
        for row in table:
            out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
            out.write("\n")


# -- subcommands -------------------------------------------------------------


def cmd_analyze(args, out) -> int:
    problem = ProblemKind(args.problem)
    protocol = ProtocolKind(args.protocol)
    reports = []
    for k in args.k:
        m = build_matrix(problem, k)
        tiles = induced_tiles(build_protocol(problem, protocol, k), m)
        if args.dist:
            dist = load_distribution_csv(args.dist, m.n_rows, m.n_cols)
            dist_name = args.dist
        else:
            dist = Distribution.uniform(m.n_rows, m.n_cols)
            dist_name = "uniform"
        for scope in args.scope:
            for mode in args.mode:
                if scope == "ratio":
                    if mode != "average":
                        raise UsageError("scope ratio is defined for --mode average")
                    value = subjective_ratio(tiles, m, dist)
                elif args.g != "cardinality":
                    g = GFunction(GVariant(args.g), threshold=args.threshold)
                    value = g_par(tiles, m, scope, dist, g, mode=mode)
                elif mode == "worst":
                    value = worst_case_par(tiles, m, scope)
                elif dist.kind == "uniform":
                    value = avg_par_uniform(tiles, m, scope)
                else:
                    value = avg_par(tiles, m, scope, dist)
                reports.append(
                    ParReport(
                        problem=problem.value,
                        protocol=protocol.value,
                        k=k,
                        scope=scope,
                        mode=mode,
                        distribution=dist_name,
                        value=value,
                        g=args.g,
                    )
                )
    if args.format == "json":
        _emit([r.to_obj() for r in reports], "json", out)
    else:
        # flat rows for csv/ascii: one per (k, scope, mode)
        rows = []
        for r in reports:
            obj = r.to_obj()
            obj["value"] = _num_str(r.value)
            rows.append(obj)
        _emit(rows, args.format, out)
    return 0


def cmd_table1(args, out) -> int:
    rows = []
    for k in args.k:
        for problem in ProblemKind:
            for protocol in ProtocolKind:
                brute = brute_force_pars(problem, protocol, k)
                for scope in PAR_SCOPES:
                    closed = closed_form_par(problem, protocol, scope, k)
                    row = {
                        "problem": problem.value,
                        "protocol": protocol.value,
                        "scope": scope,
                        "k": k,
                        "brute": _num_str(brute[scope]),
                        "closed": _num_str(closed),
                        "match": closed == brute[scope],
                    }
                    asym = asymptote_par(problem, protocol, scope, k)
                    row["asymptote"] = _num_str(asym)
                    row["asymptote_exact"] = not has_asymptote(problem, protocol, scope)
                    rows.append(row)
    _emit(rows, args.format, out)
    return 0


_PINWHEEL = Partition(
    (
        Rectangle(frozenset({0}), frozenset({0, 1})),
        Rectangle(frozenset({0, 1}), frozenset({2})),
        Rectangle(frozenset({1, 2}), frozenset({0})),
        Rectangle(frozenset({2}), frozenset({1, 2})),
        Rectangle(frozenset({1}), frozenset({1})),
    ),
    3,
    3,
    kind="tiling",
)


def _flag(identity: str, k: int, ok: bool) -> Check:
    one = QSqrt2(1)
    return Check(identity, k, one if ok else QSqrt2(0), one)


def verification_checks(k_max: int = 6) -> list[Check]:
    """Everything cmd_verify runs: formula cross-checks plus fooling-set
    certificates, tiling equalities, inducibility, and the mass-based
    counterexample."""
    checks = cross_check(k_max=k_max)
    for k in range(1, 9):
        checks.append(_flag("fooling-set-certificate", k, certify_fooling_set(k)))
    for problem in ProblemKind:
        for protocol in ProtocolKind:
            for k in range(1, k_max + 1):
                m = build_matrix(problem, k)
                ind = induced_tiles(build_protocol(problem, protocol, k), m)
                rec = recursive_tiling(problem, protocol, k)
                same = {(t.rows, t.cols, t.outcome) for t in ind} == {
                    (t.rows, t.cols, t.outcome) for t in rec
                }
                checks.append(
                    _flag(
                        f"recursive=induced:{problem.value}/{protocol.value}", k, same
                    )
                )
                checks.append(
                    _flag(
                        f"induced-tiling-inducible:{problem.value}/{protocol.value}",
                        k,
                        is_inducible(tiling_from_tiles(ind, m.n_rows, m.n_cols), m),
                    )
                )
                if problem is ProblemKind.DISJOINTNESS:
                    ones = sum(1 for t in ind if t.outcome == 1)
                    checks.append(
                        _flag(
                            f"one-region-tile-count:{protocol.value}",
                            k,
                            ones == len(fooling_set(k)),
                        )
                    )
    constant = ValueMatrix.from_function(3, 3, lambda r, c: 0)
    checks.append(_flag("pinwheel-not-inducible", 0, not is_inducible(_PINWHEEL, constant)))
    checks.extend(counterexample_checks(10, Fraction(1, 10)))
    return checks


def counterexample_checks(n: int, epsilon: Fraction) -> list[Check]:
    cx = prob_mass_counterexample(n, epsilon)
    mass = GFunction(GVariant.PROBABILITY_MASS)
    values = {}
    for name, dist in (("low", cx.d_low), ("high", cx.d_high)):
        values[("mass", name)] = g_par(cx.tiles, cx.matrix, "objective", dist, mass)
        values[("card", name)] = avg_par(cx.tiles, cx.matrix, "objective", dist)
    return [
        Check(
            "counterexample:mass-par-blind",
            n,
            QSqrt2(values[("mass", "low")]),
            QSqrt2(values[("mass", "high")]),
        ),
        Check("counterexample:mass-par-value", n, QSqrt2(values[("mass", "low")]), QSqrt2(2)),
        _flag(
            "counterexample:cardinality-par-separates",
            n,
            values[("card", "low")] != values[("card", "high")],
        ),
    ]


def _emit_checks(checks: list[Check], fmt: str, out) -> int:
    rows = [c.to_obj() for c in checks]
    if fmt == "ascii":
        for c in checks:
            status = "pass" if c.passed else "FAIL"
            out.write(f"{status}  {c.identity}  k={c.k}  {c.lhs} = {c.rhs}\n")
        failed = sum(1 for c in checks if not c.passed)
        out.write(f"{len(checks) - failed}/{len(checks)} checks passed\n")
    else:
        _emit(rows, fmt, out)
    return 0 if all(c.passed for c in checks) else 2


def cmd_verify(args, out) -> int:
    return _emit_checks(verification_checks(args.k_max), args.format, out)


def cmd_counterexample(args, out) -> int:
    cx = prob_mass_counterexample(args.n, args.epsilon)
    mass = GFunction(GVariant.PROBABILITY_MASS)
    rows = []
    for g_name in ("probability_mass", "cardinality"):
        for dist_name, dist in (("low", cx.d_low), ("high", cx.d_high)):
            if g_name == "probability_mass":
                value = g_par(cx.tiles, cx.matrix, "objective", dist, mass)
            else:
                value = avg_par(cx.tiles, cx.matrix, "objective", dist)
            rows.append(
                {
                    "g": g_name,
                    "distribution": dist_name,
                    "value": _num_str(value),
                    "value_decimal": decimal_str(value),
                }
            )
    _emit(rows, args.format, out)
    checks = counterexample_checks(args.n, args.epsilon)
    return 0 if all(c.passed for c in checks) else 2


def cmd_tiling(args, out) -> int:
    problem = ProblemKind(args.problem)
    protocol = ProtocolKind(args.protocol)
    k = args.k[0] if len(args.k) == 1 else None
    if k is None:
        raise UsageError("tiling renders a single k")
    if args.source == "recursive":
        tiles = recursive_tiling(problem, protocol, k)
    else:
        m = build_matrix(problem, k)
        tiles = induced_tiles(build_protocol(problem, protocol, k), m)
    tiles = sorted(tiles, key=lambda t: (min(t.rows), min(t.cols)))
    if args.format == "ascii":
        if k > 6:
            raise UsageError("ascii tilings are capped at k=6")
        n = 1 << k
        grid = [[""] * n for _ in range(n)]
        for t in tiles:
            for r in t.rows:
                for c in t.cols:
                    grid[r][c] = t.transcript
        width = max(len(t.transcript) for t in tiles)
        for row in grid:
            out.write(" ".join(v.rjust(width) for v in row) + "\n")
        return 0
    rows = []
    for idx, t in enumerate(tiles):
        for r, c in sorted((r, c) for r in t.rows for c in t.cols):
            rows.append(
                {
                    "region_id": idx,
                    "row": r,
                    "col": c,
                    "transcript": t.transcript,
                    "outcome": t.outcome,
                }
            )
    if args.format == "json":
        _emit(rows, "json", out)
    else:
        _emit(rows, "csv", out)
    return 0


def cmd_search_optimal(args, out) -> int:
    problem = ProblemKind(args.problem)
    rows = []
    for k in args.k:
        m = build_matrix(problem, k)
        value = optimal_avg_objective_par(m)
        rows.append(
            {
                "problem": problem.value,
                "k": k,
                "scope": "objective",
                "mode": "average",
                "value": _num_str(value),
                "value_decimal": decimal_str(value),
            }
        )
    _emit(rows, args.format, out)
    return 0


# -- wiring -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parlab", description=__doc__)
    parser.add_argument("--format", choices=("json", "csv", "ascii"), default="json")
    parser.add_argument("--out", help="write output to a file instead of stdout")
    parser.add_argument(
        "--seed-free",
        action="store_true",
        help="reserved; all computations are deterministic and seed-free",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_problem_protocol(p, protocol=True):
        p.add_argument("--problem", choices=[x.value for x in ProblemKind], required=True)
        if protocol:
            p.add_argument(
                "--protocol", choices=[x.value for x in ProtocolKind], required=True
            )
        p.add_argument("-k", type=_k_range, required=True, help="k or lo..hi")

    p = sub.add_parser("analyze", parents=[], help="compute PARs for a protocol")
    add_problem_protocol(p)
    p.add_argument(
        "--scope",
        nargs="+",
        choices=("objective", "wrt1", "wrt2", "subjective", "ratio"),
        default=["objective"],
    )
    p.add_argument("--mode", nargs="+", choices=("average", "worst"), default=["average"])
    p.add_argument("--dist", help="explicit distribution CSV (row,col,num,den)")
    p.add_argument("--g", choices=[v.value for v in GVariant], default="cardinality")
    p.add_argument("--threshold", type=_fraction, default=Fraction(1, 2))
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table1", help="evaluate every summary-table cell at k")
    p.add_argument("-k", type=_k_range, required=True)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("verify", help="run the full verification sweep")
    p.add_argument("--k-max", type=int, default=6)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tiling", help="render an induced tiling")
    add_problem_protocol(p)
    p.add_argument("--source", choices=("induced", "recursive"), default="induced")
    p.set_defaults(func=cmd_tiling)

    p = sub.add_parser("search-optimal", help="exact minimum average objective PAR")
    add_problem_protocol(p, protocol=False)
    p.set_defaults(func=cmd_search_optimal)

    p = sub.add_parser("counterexample", help="mass-based PAR counterexample")
    p.add_argument("-n", type=int, default=10)
    p.add_argument("--epsilon", type=_fraction, default=Fraction(1, 10))
    p.set_defaults(func=cmd_counterexample)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    buffer = io.StringIO()
    try:
        status = args.func(args, buffer)
    except (UsageError, CapExceededError, DistributionError, OSError, ValueError) as exc:
        print(f"parlab: error: {exc}", file=sys.stderr)
        return 1
    text = buffer.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
