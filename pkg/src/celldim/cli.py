"""Command-line front end.

Subcommands: ``loss``, ``dimension``, ``sweep``, ``validate`` and
``dump-tables``. Single results go to stdout as JSON, sweeps as CSV.
Exit codes: 0 success, 2 invalid input, 3 numeric infeasibility.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import approx, concentration, exact, montecarlo, planner, thresholds
from . import scenario as sc
from .errors import (BracketError, CapacityError, CelldimError, DegenerateFunctional,
                     Infeasible, QuadratureFailure)

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE = 0, 2, 3
_NUMERIC = (Infeasible, CapacityError, QuadratureFailure, BracketError, DegenerateFunctional)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _probability(text):
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("must lie in (0, 1)")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="celldim", description="Subchannel dimensioning of an OFDMA cell.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--scenario", required=True, help="scenario JSON file")
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--weights", choices=("closed_form", "quadrature"), default="closed_form")
        sp.add_argument("--paper-literal", action="store_true",
                        help="use the smaller Stein constant and the H_2 kurtosis term (uncertified)")

    sp = sub.add_parser("loss", help="exact loss and all bounds at a given N_avail")
    common(sp)
    sp.add_argument("--navail", type=_positive_int, required=True)
    sp.add_argument("--dump-pmf", metavar="CSV", help="write the demand pmf as CSV")

    sp = sub.add_parser("dimension", help="size the cell for a loss target")
    common(sp)
    sp.add_argument("--epsilon", type=_probability, required=True)
    sp.add_argument("--no-exact", action="store_true")
    sp.add_argument("--negligibility", type=float, default=10.0)

    sp = sub.add_parser("sweep", help="tabulate losses and sizes over a parameter grid")
    common(sp)
    sp.add_argument("--param", choices=planner.SWEEP_PARAMETERS, required=True)
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--steps", type=_positive_int, required=True)
    sp.add_argument("--epsilon", type=_probability, default=1e-4)
    sp.add_argument("--navail", type=_positive_int)
    sp.add_argument("--no-exact", action="store_true")
    sp.add_argument("--workers", type=_positive_int, default=1)

    sp = sub.add_parser("validate", help="Monte Carlo check of the exact loss")
    common(sp)
    sp.add_argument("--navail", type=_positive_int, required=True)
    sp.add_argument("--trials", type=_positive_int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=_positive_int, default=1)

    sp = sub.add_parser("dump-tables", help="thresholds and coverage weights as JSON")
    common(sp)
    return p


def _json(obj) -> str:
    def clean(x):
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(v) for v in x]
        if isinstance(x, (np.floating, float)):
            x = float(x)
            return None if math.isnan(x) else ("inf" if math.isinf(x) else x)
        if isinstance(x, np.integer):
            return int(x)
        if isinstance(x, np.bool_):
            return bool(x)
        return x
    return json.dumps(clean(obj), indent=2, sort_keys=False) + "\n"


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float) and math.isnan(value):
        return ""
    return repr(float(value))


def sweep_csv(rows, parameter: str) -> str:
    """Locale-independent CSV; floats use ``repr`` so output is reproducible."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([parameter, *planner.SWEEP_COLUMNS])
    for row in rows:
        cells = [_fmt(row[parameter])]
        for col in planner.SWEEP_COLUMNS:
            v = row[col]
            if col.startswith("n_") and not (isinstance(v, float) and math.isnan(v)):
                cells.append(str(int(v)))
            else:
                cells.append(_fmt(v))
        writer.writerow(cells)
    return buf.getvalue()


def _loss(args, s):
    model = planner.Model.build(s, args.weights)
    ms, lam = model.moments, model.lam
    pmf = exact.demand_pmf(model.compound_spec(1e-12))
    est = exact.exact_loss(pmf, args.navail)
    variant = "paper_literal" if args.paper_literal else "derivation"
    out = {
        "n_avail": args.navail,
        "load": ms.load,
        "n_sigma": (args.navail - ms.mean_demand) / ms.sigma if ms.sigma > 0 else None,
        "exact": est.as_dict(),
        "gaussian": approx.gaussian_bounds(ms, lam, args.navail, args.paper_literal).as_dict(),
        "edgeworth1": approx.edgeworth1_bounds(ms, lam, args.navail).as_dict(),
        "edgeworth2": approx.edgeworth2_upper(ms, lam, args.navail, variant).as_dict(),
        "concentration": {"upper": concentration.concentration_loss_bound(
            model.concentration_input(), args.navail)},
        "error_terms": approx.error_terms(ms, lam, args.paper_literal).as_dict(),
    }
    if args.dump_pmf:
        with open(args.dump_pmf, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# tail_bound={pmf.tail_bound!r}\n")
            fh.write("n,probability\n")
            for n, p in enumerate(pmf.probabilities):
                fh.write(f"{n},{float(p)!r}\n")
    _emit(_json(out), args.out)


def _dimension(args, s):
    opts = planner.PlanOptions(negligibility=args.negligibility, paper_literal=args.paper_literal,
                               run_exact=not args.no_exact, weights=args.weights)
    _emit(_json(planner.plan(s, args.epsilon, opts).as_dict()), args.out)


def _sweep(args, s):
    if args.steps < 2 and args.stop != args.start:
        raise ValueError("--steps must be at least 2 when --from and --to differ")
    grid = np.linspace(args.start, args.stop, args.steps)
    opts = planner.PlanOptions(paper_literal=args.paper_literal, run_exact=not args.no_exact,
                               weights=args.weights)
    rows = planner.sweep(s, args.param, grid, args.epsilon, args.navail, opts, args.workers)
    for row in rows:
        if row["error"]:
            print(f"{args.param}={row[args.param]:g}: {row['error']}", file=sys.stderr)
    _emit(sweep_csv(rows, args.param), args.out)


def _validate(args, s):
    cap = montecarlo.thread_cap()
    cfg = montecarlo.SimConfig(trials=args.trials, master_seed=args.seed, workers=args.workers)
    res = montecarlo.estimate_loss(s, args.navail, cfg)
    model = planner.Model.build(s, args.weights)
    est = exact.exact_loss(exact.demand_pmf(model.compound_spec(1e-12)), args.navail)
    lo, hi = res.ci
    agree = lo <= est.upper and est.lower <= hi
    out = {"loss_estimate": res.loss_estimate, "ci": list(res.ci), "exact_value": est.value,
           "agree": bool(agree), "trials": res.trials, "workers": args.workers,
           "thread_cap": cap, "outage_fraction": res.outage_fraction}
    _emit(_json(out), args.out)


def _dump_tables(args, s):
    table = thresholds.build_table(s, args.weights)
    out = table.as_dict()
    out["demand_levels"] = thresholds.demand_levels(s)
    _emit(_json(out), args.out)


_HANDLERS = {"loss": _loss, "dimension": _dimension, "sweep": _sweep,
             "validate": _validate, "dump-tables": _dump_tables}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        s = sc.load_scenario(args.scenario)
        _HANDLERS[args.command](args, s)
    except _NUMERIC as exc:
        print(f"celldim: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (CelldimError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"celldim: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
