"""MinRank minors-modeling harness: instances, bounds, solving degrees, experiments.

Exit codes: 0 success, 1 usage error, 2 engine abort, 3 invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from .bounds import bound_report, bound_report_for
from .field import DEFAULT_PRIME
from .gbengine import EngineAbort
from .harness import (
    ExperimentConfig,
    HomogenizationError,
    NotApplicableError,
    bruteforce,
    run_experiment,
    solve_instance,
    summarize,
    write_csv,
)
from .io import CSV_COLUMNS, FormatError, dumps_instance, load_instance
from .multipoly import PolynomialError
from .polymatrix import DegreeError, DegreeMatrix, InstanceError, check_params, random_instance, validate_degree_matrix

EXIT_OK, EXIT_USAGE, EXIT_ABORT, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _add_params(sp, required=True):
    sp.add_argument("-m", type=int, required=required)
    sp.add_argument("-n", type=int, required=required)
    sp.add_argument("-r", type=int, required=required)
    sp.add_argument("-k", type=int, required=required)
    sp.add_argument("-p", type=int, default=DEFAULT_PRIME)
    sp.add_argument("--kind", choices=("classical", "generalized"), default="classical")
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--degree-grid", help='JSON grid, e.g. "[[1,2],[2,3]]"')
    grp.add_argument("--degree-const", type=int)


def _degrees(args) -> DegreeMatrix:
    if args.degree_grid:
        try:
            grid = json.loads(args.degree_grid)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--degree-grid is not valid JSON: {exc}") from None
        return validate_degree_matrix(grid)
    return DegreeMatrix.constant(args.m, args.n, args.degree_const or 1)


def _emit(obj, out):
    text = json.dumps(obj, indent=2, default=str) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    check_params(args.m, args.n, args.r, args.k, args.p)
    D = _degrees(args)
    if args.kind == "classical" and D.is_constant() != 1:
        raise UsageError("classical instances have all entry degrees equal to 1")
    inst = random_instance(args.kind, args.m, args.n, args.r, args.k, D, args.p, args.homogeneous, args.seed)
    text = dumps_instance(inst)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bound(args) -> int:
    if args.instance:
        rep = bound_report(load_instance(args.instance))
    else:
        if None in (args.m, args.n, args.r, args.k):
            raise UsageError("give an instance file or all of -m -n -r -k")
        check_params(args.m, args.n, args.r, args.k)
        D = _degrees(args)
        if (D.m, D.n) != (args.m, args.n):
            raise UsageError(f"degree grid is {D.m}x{D.n}, expected {args.m}x{args.n}")
        rep = bound_report_for(args.m, args.n, args.r, args.k, D, args.kind == "classical")
    if args.table:
        print(rep.to_table())
    else:
        _emit(rep.to_dict(), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    res = solve_instance(inst, cap=args.cap, override=args.override)
    out = res.to_dict()
    _emit(out, args.out)
    rep = res.report
    if res.bounds.applicable and rep.bound_respected is False:
        print(f"bound violated: measured {rep.measured_solvdeg} > {rep.bound}", file=sys.stderr)
        return EXIT_VIOLATION
    if not rep.oracle_agrees:
        print("Macaulay stepper and Buchberger oracle disagree", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_bruteforce(args) -> int:
    inst = load_instance(args.instance)
    try:
        res = bruteforce(inst)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit({"points": res.points, "solutions": res.solutions, "agrees": res.agrees}, args.out)
    if not res.agrees:
        print("rank locus and minors' zero locus differ", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    if args.cap is not None:
        cfg.cap = args.cap
    rows = run_experiment(cfg, jobs=args.jobs)
    summary = summarize(cfg, rows)
    csv_path = args.out or cfg.out_csv
    if csv_path:
        write_csv(rows, csv_path)
    json_path = args.json or cfg.out_json
    if json_path:
        with open(json_path, "w") as fh:
            json.dump(summary, fh, indent=2)
    for c in summary["cells"]:
        cell = c["cell"]
        print(
            f"{cell['kind']} m={cell['m']} n={cell['n']} r={cell['r']} k={cell['k']}: "
            f"max solvdeg {c['max_solvdeg']} / bound {c['bound']}, "
            f"violations {c['violations']}, resamples {c['resamples']}"
        )
    if not csv_path:
        w = csv.writer(sys.stdout)
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(r.csv_row())
    return EXIT_VIOLATION if summary["violations"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="minrank", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="generate a random instance file")
    _add_params(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--homogeneous", action=argparse.BooleanOptionalAction, default=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("bound", help="closed-form bounds for an instance or parameters")
    sp.add_argument("instance", nargs="?")
    _add_params(sp, required=False)
    sp.add_argument("--table", action="store_true", help="human-readable table instead of JSON")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("solve", help="measure the solving degree of an instance")
    sp.add_argument("instance")
    sp.add_argument("--cap", type=int, help="degree cap (default bound + 3)")
    sp.add_argument("--override", action="store_true", help="solve over-determined instances too")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("bruteforce", help="enumerate F_p^k and cross-check the minors")
    sp.add_argument("instance")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bruteforce)

    sp = sub.add_parser("experiment", help="run a batch experiment from a JSON config")
    sp.add_argument("config")
    sp.add_argument("--cap", type=int)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", help="CSV output path")
    sp.add_argument("--json", help="JSON summary path")
    sp.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except EngineAbort as exc:
        print(f"engine abort: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except HomogenizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (UsageError, InstanceError, DegreeError, FormatError, PolynomialError, NotApplicableError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
