"""Bottom-up rationing dynamics for supply-constrained networks.

Four rules govern how an output-constrained supplier divides its
production among customers:

* proportional -- everyone, including the final consumer, is scaled by
  the same ratio of capacity to total demand;
* mixed -- intermediate customers are rationed proportionally but always
  ahead of the final consumer;
* largest_first -- intermediate customers are served in descending order
  of their initial demand, final consumers last;
* random -- like largest_first but the per-supplier serving order is a
  seeded random permutation.

Each rule is iterated as a fixed-point map on the total-demand vector.
Convergence requires both that demand stops moving and that production
meets it, x = d: only then has every bottleneck worked itself out and
the allocation is feasible by construction (ceilings hold and x = L f).
Shock patterns that leave a supplier permanently promising more than
its input-constrained production can deliver never reach x = d; they
are reported as non-converged rather than as a spurious equilibrium.

Delivered consumption is capped at its ceiling; the transient excess a
priority rule can produce is treated as discarded. Without the cap the
prioritising rules can converge to consumption above the exogenous
ceiling, breaking feasibility.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .economy import Economy, LeontiefOperator
from .errors import DimensionMismatch
from .shocks import Allocation, Constraints, allocation_is_feasible

#: RNG used for random rationing; recorded in outputs for reproducibility.
GENERATOR_NAME = "numpy.random.Generator(PCG64)"


@dataclass(frozen=True)
class RationingOptions:
    tol: float = 1e-10
    max_iter: int = 10**6
    track_trajectory: bool = False


@dataclass(frozen=True)
class RationingResult:
    allocation: Allocation
    converged: bool
    iterations: int
    #: final max relative residual: demand change between sweeps and
    #: shortfall of output behind demand
    residual: float
    #: optional per-iteration (d, x, f) log
    trajectory: list = None


@dataclass(frozen=True)
class EnsembleStats:
    samples: int
    failures: int
    mean_output: float
    mean_consumption: float
    output_quartiles: tuple
    consumption_quartiles: tuple
    mean_x: np.ndarray
    mean_f: np.ndarray
    master_seed: int
    generator: str = GENERATOR_NAME


def _proportional_ratios(d, avail):
    with np.errstate(divide="ignore"):
        return np.where(d > 0, avail / np.where(d > 0, d, 1.0), np.inf)


def _mixed_ratios(d, avail, A):
    inter = A @ d
    with np.errstate(divide="ignore"):
        return np.where(inter > 0, avail / np.where(inter > 0, inter, 1.0), np.inf)


def _bottleneck(r, A):
    # s_i = min over suppliers j (a_ji > 0) of min(r_j, 1); 1 if no suppliers
    capped = np.minimum(r, 1.0)
    has_supplier = A > 0  # has_supplier[j, i]: j supplies i
    s = np.ones(A.shape[0])
    for i in range(A.shape[0]):
        suppliers = np.flatnonzero(has_supplier[:, i])
        if suppliers.size:
            s[i] = capped[suppliers].min()
    return s


def _priority_bottleneck(d, avail, A, rankings):
    """Bottlenecks when suppliers serve intermediate customers in rank order.

    Capacity is granted greedily down the ranking: a customer's ratio is
    the supplier's capacity left after everyone ranked above it, divided
    by its own demand, so total grants never exceed availability. The
    customer's binding constraint is its worst ratio across suppliers.
    """
    n = A.shape[0]
    s = np.ones(n)
    for i in range(n):
        order = rankings[i]
        if order.size == 0:
            continue
        w = A[i, order] * d[order]
        cum_before = np.concatenate(([0.0], np.cumsum(w)[:-1]))
        remaining = np.maximum(avail[i] - cum_before, 0.0)
        with np.errstate(divide="ignore"):
            r = np.where(w > 0, remaining / np.where(w > 0, w, 1.0), np.inf)
        np.minimum.at(s, order, np.minimum(r, 1.0))
    return s


def _iterate(e, op, c, opts, bottleneck, method):
    A, L = op.A, op.L
    floor = 1e-12 * e.x.sum()
    d = L @ c.f_max
    x = f = None
    trajectory = [] if opts.track_trajectory else None
    residual = gap_prev = np.inf
    for t in range(1, opts.max_iter + 1):
        s = bottleneck(d, c.x_max)
        x = np.minimum(c.x_max, s * d)
        f = np.minimum(c.f_max, np.maximum(x - A @ x, 0.0))
        d_next = L @ f
        if trajectory is not None:
            trajectory.append((d.copy(), x.copy(), f.copy()))
        # demand change between sweeps, and shortfall of output behind demand
        moved = float(np.max(np.abs(d_next - d) / np.maximum(d, floor))) if d.size else 0.0
        gap = float(np.max(np.abs(x - d_next) / np.maximum(d_next, floor))) if d.size else 0.0
        residual = max(moved, gap)
        d = d_next
        if residual <= opts.tol:
            allocation = Allocation(
                x=x, f=f, method=method,
                feasible=allocation_is_feasible(x, f, op, c, tol=10 * opts.tol),
                iterations=t,
            )
            return RationingResult(allocation, True, t, residual, trajectory)
        if moved <= opts.tol and gap > gap_prev * (1.0 - 1e-3):
            # demand is stationary and x is a function of d alone, so a
            # non-shrinking gap can never close: the rule has stalled at
            # an overcommitted state short of x = d
            break
        gap_prev = gap
    allocation = Allocation(x=x, f=f, method=method, feasible=False,
                            iterations=t)
    return RationingResult(allocation, False, t, residual, trajectory)


def _check_dims(e, op, c):
    if op.n != e.n or c.x_max.shape != (e.n,) or c.f_max.shape != (e.n,):
        raise DimensionMismatch("economy, operator and constraints disagree")


def ration_proportional(e: Economy, op: LeontiefOperator, c: Constraints,
                        opts: RationingOptions = RationingOptions()) -> RationingResult:
    """All customers, final consumers included, are rationed by the same share."""
    _check_dims(e, op, c)
    return _iterate(
        e, op, c, opts,
        lambda d, avail: _bottleneck(_proportional_ratios(d, avail), op.A),
        "proportional",
    )


def ration_mixed(e: Economy, op: LeontiefOperator, c: Constraints,
                 opts: RationingOptions = RationingOptions()) -> RationingResult:
    """Proportional among industries, with industries served before consumers."""
    _check_dims(e, op, c)
    return _iterate(
        e, op, c, opts,
        lambda d, avail: _bottleneck(_mixed_ratios(d, avail, op.A), op.A),
        "mixed",
    )


def _ranked_result(e, op, c, opts, rankings, method):
    return _iterate(
        e, op, c, opts,
        lambda d, avail: _priority_bottleneck(d, avail, op.A, rankings),
        method,
    )


def largest_first_rankings(op: LeontiefOperator, d1: np.ndarray):
    """Per-supplier customer order by initial demand size, frozen at t=1.

    Ties break by ascending customer index.
    """
    rankings = []
    for i in range(op.n):
        customers = np.flatnonzero(op.A[i] > 0)
        weights = op.A[i, customers] * d1[customers]
        order = customers[np.lexsort((customers, -weights))]
        rankings.append(order)
    return rankings


def random_rankings(op: LeontiefOperator, seed):
    """Per-supplier random customer orders, drawn once from the given seed."""
    rng = np.random.default_rng(seed)
    rankings = []
    for i in range(op.n):
        customers = np.flatnonzero(op.A[i] > 0)
        rankings.append(rng.permutation(customers))
    return rankings


def ration_largest_first(e: Economy, op: LeontiefOperator, c: Constraints,
                         opts: RationingOptions = RationingOptions()) -> RationingResult:
    """Serve larger intermediate customers first; final consumers last."""
    _check_dims(e, op, c)
    rankings = largest_first_rankings(op, op.L @ c.f_max)
    return _ranked_result(e, op, c, opts, rankings, "largest_first")


def ration_random(e: Economy, op: LeontiefOperator, c: Constraints, seed,
                  opts: RationingOptions = RationingOptions()) -> RationingResult:
    """Serve intermediate customers in a seeded random order, consumers last."""
    _check_dims(e, op, c)
    rankings = random_rankings(op, seed)
    return _ranked_result(e, op, c, opts, rankings, "random")


def sample_seed(master_seed, index) -> np.random.SeedSequence:
    """Deterministic per-sample seed stream derived from (master, index)."""
    return np.random.SeedSequence([int(master_seed), int(index)])


def ensemble_random(e: Economy, op: LeontiefOperator, c: Constraints,
                    n_samples: int, master_seed: int,
                    opts: RationingOptions = RationingOptions()) -> EnsembleStats:
    """Random-rationing ensemble with order-independent statistics.

    Non-converged samples are counted and excluded from the statistics.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    outputs, consumptions, xs, fs = [], [], [], []
    failures = 0
    for k in range(n_samples):
        res = ration_random(e, op, c, sample_seed(master_seed, k), opts)
        if not res.converged:
            failures += 1
            continue
        outputs.append(res.allocation.x.sum())
        consumptions.append(res.allocation.f.sum())
        xs.append(res.allocation.x)
        fs.append(res.allocation.f)
    outputs = np.array(outputs)
    consumptions = np.array(consumptions)
    if outputs.size == 0:
        nan = float("nan")
        empty = np.full(e.n, nan)
        return EnsembleStats(n_samples, failures, nan, nan,
                             (nan, nan, nan), (nan, nan, nan),
                             empty, empty, master_seed)
    return EnsembleStats(
        samples=n_samples,
        failures=failures,
        mean_output=float(outputs.mean()),
        mean_consumption=float(consumptions.mean()),
        output_quartiles=tuple(np.percentile(outputs, [25, 50, 75])),
        consumption_quartiles=tuple(np.percentile(consumptions, [25, 50, 75])),
        mean_x=np.mean(xs, axis=0),
        mean_f=np.mean(fs, axis=0),
        master_seed=master_seed,
    )
