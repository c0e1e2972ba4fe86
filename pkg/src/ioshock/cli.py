"""Command-line front end.

Subcommands: ``validate`` (parse and report invariants), ``shock`` (emit
constraint ceilings), ``run`` (all methods on one scenario),
``sweep-scale`` and ``sweep-density``. Exit status is 0 on success, 1 on
a validation failure (bad input files), 2 on a computation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import __version__
from .economy import coefficients, metrics
from .errors import (
    DimensionMismatch,
    IdentityViolation,
    IoShockError,
    MissingIndustry,
    NegativeEntry,
    OutOfRange,
    ParseError,
    UnknownIndustry,
)
from .experiments import ALL_METHODS, SweepSpec, run_method, summarize, sweep_density, sweep_scale
from .fileio import file_digest, parse_economy_csv, parse_shocks_csv, write_results
from .rationing import GENERATOR_NAME, RationingOptions
from .shocks import aggregate_shocks, make_constraints

_VALIDATION_ERRORS = (
    ParseError, IdentityViolation, NegativeEntry, OutOfRange,
    UnknownIndustry, MissingIndustry, DimensionMismatch,
)


def _grid_values(text):
    """Parse '0.3' or 'start:stop:step' into a list of floats."""
    if ":" in text:
        start, stop, step = (float(v) for v in text.split(":"))
        count = int(round((stop - start) / step)) + 1
        return [round(start + k * step, 12) for k in range(count)]
    return [float(text)]


def _add_common(p, shocks_required=True):
    p.add_argument("--economy", required=True, help="economy CSV file")
    p.add_argument("--shocks", required=shocks_required, help="shock CSV file")
    p.add_argument("--percent", action="store_true",
                   help="shock file values are percentages")
    p.add_argument("--allow-missing", action="store_true",
                   help="zero-fill industries absent from the shock file")
    p.add_argument("--alpha-supply", default="1",
                   help="supply scaling factor, or start:stop:step grid")
    p.add_argument("--alpha-demand", default="1",
                   help="demand scaling factor, or start:stop:step grid")
    p.add_argument("--methods", default="all",
                   help="comma-separated method list or 'all'")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--samples", type=int, default=100,
                   help="random-rationing samples")
    p.add_argument("--reps", type=int, default=1, help="replicates per grid point")
    p.add_argument("--tol", type=float, default=1e-10,
                   help="rationing convergence tolerance")
    p.add_argument("--max-iter", type=int, default=10**6,
                   help="rationing iteration cap")
    p.add_argument("--workers", type=int, default=1, help="worker threads")
    p.add_argument("--out", default="out", help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ioshock",
        description="Propagate simultaneous supply and demand shocks "
                    "through an input-output production network.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse inputs and report invariants")
    p.add_argument("--economy", required=True)
    p.add_argument("--shocks")
    p.add_argument("--percent", action="store_true")
    p.add_argument("--allow-missing", action="store_true")

    p = sub.add_parser("shock", help="emit output/consumption ceilings")
    _add_common(p)

    p = sub.add_parser("run", help="evaluate methods on one scenario")
    _add_common(p)

    p = sub.add_parser("sweep-scale", help="shock-magnitude sweep")
    _add_common(p)

    p = sub.add_parser("sweep-density", help="network-density sweep")
    _add_common(p)
    p.add_argument("--densities", required=True,
                   help="density targets, value or start:stop:step")
    p.add_argument("--removal-mode", default="random",
                   choices=["random", "smallest_first"])
    return parser


def _methods(arg):
    if arg == "all":
        return ALL_METHODS
    return tuple(m.strip() for m in arg.split(",") if m.strip())


def _load(args, need_shocks=True):
    economy = parse_economy_csv(args.economy)
    scenario = None
    if getattr(args, "shocks", None):
        scenario = parse_shocks_csv(
            args.shocks, economy.labels,
            percent=args.percent, allow_missing=args.allow_missing,
        )
    elif need_shocks:
        raise ParseError("a shock file is required")
    return economy, scenario


def _provenance(args, extra=None):
    prov = {
        "tool": f"ioshock {__version__}",
        "generator": GENERATOR_NAME,
        "economy_sha256": file_digest(args.economy),
        "seed": getattr(args, "seed", None),
        "tol": getattr(args, "tol", None),
        "max_iter": getattr(args, "max_iter", None),
    }
    if getattr(args, "shocks", None):
        prov["shocks_sha256"] = file_digest(args.shocks)
    if extra:
        prov.update(extra)
    return prov


def _cmd_validate(args):
    economy, scenario = _load(args, need_shocks=False)
    op = coefficients(economy)
    m = metrics(economy, op)
    report = {
        "industries": economy.n,
        "total_output": m.total_output,
        "total_consumption": m.total_consumption,
        "density": m.density,
        "avg_multiplier": m.avg_multiplier,
        "intermediate_share": m.intermediate_share,
        "negative_value_added": economy.negative_value_added,
    }
    if scenario is not None:
        c = make_constraints(economy, scenario)
        eps_s, eps_d = aggregate_shocks(economy, c)
        report["aggregate_supply_shock"] = eps_s
        report["aggregate_demand_shock"] = eps_d
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def _scenario_at(scenario, args):
    a_s = _grid_values(args.alpha_supply)
    a_d = _grid_values(args.alpha_demand)
    if len(a_s) != 1 or len(a_d) != 1:
        raise ParseError("this subcommand takes scalar alpha values")
    return scenario.with_alphas(a_s[0], a_d[0])


def _cmd_shock(args):
    economy, scenario = _load(args)
    c = make_constraints(economy, _scenario_at(scenario, args))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["industry", "x_max", "f_max"])
    for i, label in enumerate(economy.labels):
        writer.writerow([label, repr(float(c.x_max[i])), repr(float(c.f_max[i]))])
    return 0


def _cmd_run(args):
    economy, scenario = _load(args)
    scenario = _scenario_at(scenario, args)
    op = coefficients(economy)
    c = make_constraints(economy, scenario)
    opts = RationingOptions(tol=args.tol, max_iter=args.max_iter)
    allocations = []
    for method in _methods(args.methods):
        seed = np.random.SeedSequence([args.seed, 0])
        allocation, converged = run_method(method, economy, op, c, opts, seed)
        allocations.append(allocation)
        if not converged:
            print(f"warning: {method} did not converge", file=sys.stderr)
    spec = SweepSpec(methods=_methods(args.methods),
                     grid=((scenario.alpha_supply, scenario.alpha_demand),),
                     random_samples=args.samples, master_seed=args.seed,
                     options=opts, workers=args.workers)
    records = sweep_scale(economy, scenario, spec)
    files = write_results(args.out, economy, c, allocations, records,
                          summarize(records), _provenance(args))
    print("\n".join(files))
    return 0


def _cmd_sweep_scale(args):
    economy, scenario = _load(args)
    grid = tuple((a_s, a_d)
                 for a_s in _grid_values(args.alpha_supply)
                 for a_d in _grid_values(args.alpha_demand))
    spec = SweepSpec(
        methods=_methods(args.methods), grid=grid,
        repetitions=args.reps, random_samples=args.samples,
        master_seed=args.seed,
        options=RationingOptions(tol=args.tol, max_iter=args.max_iter),
        workers=args.workers,
    )
    records = sweep_scale(economy, scenario, spec)
    c = make_constraints(economy, scenario)
    files = write_results(args.out, economy, c, [], records,
                          summarize(records), _provenance(args))
    print("\n".join(files))
    return 0


def _cmd_sweep_density(args):
    economy, scenario = _load(args)
    a_s = _grid_values(args.alpha_supply)
    a_d = _grid_values(args.alpha_demand)
    if len(a_s) != 1 or len(a_d) != 1:
        raise ParseError("sweep-density takes scalar alpha values")
    spec = SweepSpec(
        methods=_methods(args.methods),
        grid=tuple(_grid_values(args.densities)),
        removal_mode=args.removal_mode,
        repetitions=args.reps, random_samples=args.samples,
        master_seed=args.seed,
        options=RationingOptions(tol=args.tol, max_iter=args.max_iter),
        workers=args.workers,
    )
    records = sweep_density(economy, scenario, spec,
                            alpha_supply=a_s[0], alpha_demand=a_d[0])
    c = make_constraints(economy, scenario.with_alphas(a_s[0], a_d[0]))
    files = write_results(args.out, economy, c, [], records,
                          summarize(records),
                          _provenance(args, {"removal_mode": args.removal_mode}))
    print("\n".join(files))
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "shock": _cmd_shock,
    "run": _cmd_run,
    "sweep-scale": _cmd_sweep_scale,
    "sweep-density": _cmd_sweep_density,
}


def run_command(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IoShockError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
