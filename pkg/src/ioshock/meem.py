"""Mixed endogenous/exogenous model with infeasibility diagnostics.

Industries are split into a supply-constrained group, whose output is
pinned at its ceiling, and a demand-constrained group, whose consumption
is pinned at its ceiling. The complementary quantities are solved from
the partitioned block system. The solve always satisfies the accounting
identity, but the assembled allocation can violate the exogenous ceilings
(negative or excessive consumption); diagnostics record exactly where.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .economy import Economy, LeontiefOperator
from .errors import SingularBlock
from .shocks import Constraints

_DIAG_TOL = 1e-9


@dataclass(frozen=True)
class MeemPartition:
    """Index sets of supply- and demand-constrained industries."""

    supply_set: np.ndarray
    demand_set: np.ndarray
    #: applied per-industry shock magnitudes, x0 - x_max and f0 - f_max
    supply_magnitude: np.ndarray
    demand_magnitude: np.ndarray


@dataclass(frozen=True)
class MeemSolution:
    x: np.ndarray
    f: np.ndarray
    partition: MeemPartition
    negative_consumption: np.ndarray
    consumption_above_max: np.ndarray
    output_above_max: np.ndarray
    negative_output: np.ndarray
    feasible: bool


def classify(e: Economy, c: Constraints) -> MeemPartition:
    """Split industries by which applied shock is larger in absolute terms.

    An industry is supply-constrained when its output shock strictly
    exceeds its consumption shock; ties, including the no-shock case, go
    to the demand side so the unshocked baseline is recovered exactly.
    """
    supply_mag = e.x - c.x_max
    demand_mag = e.f - c.f_max
    supply = supply_mag > demand_mag
    return MeemPartition(
        supply_set=np.flatnonzero(supply),
        demand_set=np.flatnonzero(~supply),
        supply_magnitude=supply_mag,
        demand_magnitude=demand_mag,
    )


def solve_meem(e: Economy, op: LeontiefOperator, c: Constraints,
               p: MeemPartition) -> MeemSolution:
    """Block solve with x fixed at its ceiling on the supply set and f at
    its ceiling on the demand set.

    Endogenous output of the demand group comes from inverting its own
    block; endogenous consumption of the supply group is the accounting
    residual. Degenerate partitions (either group empty) are supported.
    """
    S, D = p.supply_set, p.demand_set
    A = op.A
    x_s = c.x_max[S]
    f_d = c.f_max[D]

    A_dd = A[np.ix_(D, D)]
    A_ds = A[np.ix_(D, S)]
    A_ss = A[np.ix_(S, S)]
    A_sd = A[np.ix_(S, D)]

    try:
        x_d = np.linalg.solve(np.eye(D.size) - A_dd, A_ds @ x_s + f_d)
    except np.linalg.LinAlgError as exc:
        raise SingularBlock("(I - A_dd) is singular") from exc
    f_s = (np.eye(S.size) - A_ss) @ x_s - A_sd @ x_d

    x = np.empty(e.n)
    f = np.empty(e.n)
    x[S], x[D] = x_s, x_d
    f[S], f[D] = f_s, f_d
    return check_feasibility(x, f, p, c)


def check_feasibility(x, f, p: MeemPartition, c: Constraints) -> MeemSolution:
    """Flag every ceiling violation of an assembled MEEM allocation.

    Negative output on the demand side is recorded for completeness but
    cannot fire while supply shocks are nonnegative.
    """
    scale = max(float(np.max(np.abs(x))), 1.0)
    tol = _DIAG_TOL * scale
    on_supply = np.zeros(x.size, dtype=bool)
    on_supply[p.supply_set] = True

    negative_consumption = on_supply & (f < -tol)
    consumption_above_max = on_supply & (f > c.f_max + tol)
    output_above_max = ~on_supply & (x > c.x_max + tol)
    negative_output = ~on_supply & (x < -tol)
    feasible = not (
        negative_consumption.any()
        or consumption_above_max.any()
        or output_above_max.any()
        or negative_output.any()
    )
    return MeemSolution(
        x=x, f=f, partition=p,
        negative_consumption=negative_consumption,
        consumption_above_max=consumption_above_max,
        output_above_max=output_above_max,
        negative_output=negative_output,
        feasible=feasible,
    )
