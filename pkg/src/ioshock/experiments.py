"""Shock-magnitude and network-density sweep experiments.

Both sweeps evaluate every requested propagation method on identical
constraints at each grid point and emit one flat record per evaluation.
Per-unit random seeds are derived from (master seed, grid index,
replicate, sample), so results are bit-identical regardless of worker
count or scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .economy import (
    Economy,
    coefficients,
    metrics,
    remove_links,
    smallest_links,
)
from .errors import IoShockError
from .lp import optimal_allocation
from .meem import classify, solve_meem
from .rationing import (
    RationingOptions,
    ration_largest_first,
    ration_mixed,
    ration_proportional,
    ration_random,
)
from .shocks import Allocation, ShockScenario, direct_allocation, make_constraints

ALL_METHODS = (
    "direct",
    "lp_output",
    "lp_consumption",
    "proportional",
    "mixed",
    "largest_first",
    "random",
    "meem",
)


@dataclass(frozen=True)
class SweepSpec:
    methods: tuple = ALL_METHODS
    #: (alpha_supply, alpha_demand) pairs for scale sweeps,
    #: density targets for density sweeps
    grid: tuple = ((0.0, 0.0),)
    removal_mode: str = "random"  # "random" | "smallest_first"
    repetitions: int = 1
    #: samples per replicate for the random-rationing method
    random_samples: int = 1
    master_seed: int = 0
    options: RationingOptions = RationingOptions()
    workers: int = 1

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        for g in self.grid:
            vals = g if isinstance(g, tuple) else (g,)
            if any(v < 0 or v > 1 for v in vals):
                raise ValueError(f"grid value {g} outside [0, 1]")
        unknown = set(self.methods) - set(ALL_METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")


@dataclass(frozen=True)
class SweepRecord:
    alpha_supply: float
    alpha_demand: float
    density_target: float  # nan for scale sweeps
    method: str
    replicate: int
    sample: int
    total_output: float
    total_consumption: float
    norm_output: float
    norm_consumption: float
    feasible: bool
    converged: bool
    avg_multiplier: float
    intermediate_share: float
    error: str = ""


@dataclass(frozen=True)
class SweepSummary:
    alpha_supply: float
    alpha_demand: float
    density_target: float
    method: str
    count: int
    failures: int
    mean_output: float
    q25_output: float
    q50_output: float
    q75_output: float
    mean_consumption: float
    q25_consumption: float
    q50_consumption: float
    q75_consumption: float


def _sample_seed(master, grid_index, replicate, sample):
    return np.random.SeedSequence([int(master), int(grid_index),
                                   int(replicate), 2, int(sample)])


def _removal_seed(master, grid_index, replicate):
    return np.random.SeedSequence([int(master), int(grid_index),
                                   int(replicate), 1])


def run_method(method, e, op, c, opts=RationingOptions(), seed=None):
    """Evaluate one propagation method; returns (Allocation, converged)."""
    if method == "direct":
        return direct_allocation(e, c, op), True
    if method == "lp_output":
        return optimal_allocation(e, c, "output", op), True
    if method == "lp_consumption":
        return optimal_allocation(e, c, "consumption", op), True
    if method == "proportional":
        res = ration_proportional(e, op, c, opts)
    elif method == "mixed":
        res = ration_mixed(e, op, c, opts)
    elif method == "largest_first":
        res = ration_largest_first(e, op, c, opts)
    elif method == "random":
        res = ration_random(e, op, c, seed, opts)
    elif method == "meem":
        sol = solve_meem(e, op, c, classify(e, c))
        return Allocation(sol.x, sol.f, "meem", sol.feasible, 0), True
    else:
        raise ValueError(f"unknown method {method!r}")
    return res.allocation, res.converged


def evaluate_point(e, op, c, spec: SweepSpec, grid_index, replicate,
                   alpha_supply, alpha_demand, density_target=float("nan")):
    """All method records for one (grid point, replicate) on one economy."""
    m = metrics(e, op)
    base_x = m.total_output
    base_f = m.total_consumption
    records = []

    def record(method, sample, allocation, converged, error=""):
        if allocation is None:
            out = cons = float("nan")
        else:
            out = float(allocation.x.sum())
            cons = float(allocation.f.sum())
        records.append(SweepRecord(
            alpha_supply=alpha_supply,
            alpha_demand=alpha_demand,
            density_target=density_target,
            method=method,
            replicate=replicate,
            sample=sample,
            total_output=out,
            total_consumption=cons,
            norm_output=out / base_x if base_x > 0 else float("nan"),
            norm_consumption=cons / base_f if base_f > 0 else float("nan"),
            feasible=bool(allocation.feasible) if allocation is not None else False,
            converged=converged,
            avg_multiplier=m.avg_multiplier,
            intermediate_share=m.intermediate_share,
            error=error,
        ))

    for method in spec.methods:
        samples = spec.random_samples if method == "random" else 1
        for k in range(samples):
            seed = _sample_seed(spec.master_seed, grid_index, replicate, k)
            try:
                allocation, converged = run_method(method, e, op, c,
                                                   spec.options, seed)
                record(method, k, allocation, converged)
            except IoShockError as exc:
                record(method, k, None, False, error=str(exc))
    return records


def sweep_scale(e: Economy, s: ShockScenario, spec: SweepSpec):
    """Rebuild constraints at each (alpha_supply, alpha_demand) grid point
    and evaluate every method on them."""
    if not spec.grid:
        raise ValueError("grid must be nonempty")
    op = coefficients(e)

    def unit(args):
        g, (a_s, a_d), rep = args
        c = make_constraints(e, s.with_alphas(a_s, a_d))
        return evaluate_point(e, op, c, spec, g, rep, a_s, a_d)

    units = [(g, point, rep)
             for g, point in enumerate(spec.grid)
             for rep in range(spec.repetitions)]
    return _run_units(unit, units, spec.workers)


def sweep_density(e: Economy, s: ShockScenario, spec: SweepSpec,
                  alpha_supply: float = 1.0, alpha_demand: float = 1.0):
    """Thin the network to each target density, rebalance, re-shock, evaluate.

    Removal order per spec.removal_mode: uniformly random links per replicate
    seed, or the deterministic smallest-first order (one replicate).
    Replicates whose removal leaves an industry with inputs but no output
    are recorded with an error instead of aborting the sweep.
    """
    if not spec.grid:
        raise ValueError("grid must be nonempty")
    n = e.n
    current = float(np.count_nonzero(e.Z > 0) / n**2)
    positive = [(int(i), int(j)) for i, j in zip(*np.nonzero(e.Z > 0))]
    reps = 1 if spec.removal_mode == "smallest_first" else spec.repetitions

    def unit(args):
        g, target, rep = args
        k = int(round((current - target) * n**2))
        k = min(max(k, 0), len(positive))
        if spec.removal_mode == "smallest_first":
            links = smallest_links(e, k)
        elif spec.removal_mode == "random":
            rng = np.random.default_rng(_removal_seed(spec.master_seed, g, rep))
            chosen = rng.choice(len(positive), size=k, replace=False)
            links = [positive[t] for t in chosen]
        else:
            raise ValueError(f"unknown removal mode {spec.removal_mode!r}")
        e2 = remove_links(e, links)
        try:
            op2 = coefficients(e2)
        except IoShockError as exc:
            return [SweepRecord(
                alpha_supply=alpha_supply, alpha_demand=alpha_demand,
                density_target=target, method=method, replicate=rep, sample=0,
                total_output=float("nan"), total_consumption=float("nan"),
                norm_output=float("nan"), norm_consumption=float("nan"),
                feasible=False, converged=False,
                avg_multiplier=float("nan"), intermediate_share=float("nan"),
                error=str(exc),
            ) for method in spec.methods]
        c2 = make_constraints(e2, s.with_alphas(alpha_supply, alpha_demand))
        return evaluate_point(e2, op2, c2, spec, g, rep,
                              alpha_supply, alpha_demand, density_target=target)

    units = [(g, target, rep)
             for g, target in enumerate(spec.grid)
             for rep in range(reps)]
    for _, target, _ in units:
        if target > current + 1e-12:
            raise ValueError(f"target density {target} above current {current}")
    return _run_units(unit, units, spec.workers)


def _run_units(fn, units, workers):
    if workers <= 1:
        chunks = [fn(u) for u in units]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(fn, units))
    return [rec for chunk in chunks for rec in chunk]


def summarize(records):
    """Aggregate statistics per (grid point, method), pooling replicate
    and random-rationing samples as one distribution."""
    if not records:
        raise ValueError("empty record table")
    groups = {}
    for r in records:
        key = (r.alpha_supply, r.alpha_demand, r.density_target, r.method)
        groups.setdefault(key, []).append(r)
    out = []
    for key in sorted(groups, key=lambda k: (k[0], k[1], _nan_key(k[2]), k[3])):
        rows = groups[key]
        ok = [r for r in rows if r.converged and not r.error]
        outs = np.array([r.norm_output for r in ok])
        cons = np.array([r.norm_consumption for r in ok])
        if outs.size:
            oq = np.percentile(outs, [25, 50, 75])
            cq = np.percentile(cons, [25, 50, 75])
            stats = (float(outs.mean()), *map(float, oq),
                     float(cons.mean()), *map(float, cq))
        else:
            stats = (float("nan"),) * 8
        out.append(SweepSummary(*key, len(rows), len(rows) - len(ok), *stats))
    return out


def _nan_key(v):
    return (1, 0.0) if v != v else (0, v)
