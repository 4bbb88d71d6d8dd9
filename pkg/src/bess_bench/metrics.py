"""
Reported quantities: simultaneity, tracking RMSE, TEP cost and energy
figures, and performance curves.
"""

import math
from dataclasses import dataclass

import numpy as np

SIMULTANEITY_THRESHOLD = 1e-4


@dataclass(frozen=True)
class SptMetrics:
    simult_pct: float
    rmse: float
    rmse_rel: float
    runtime_ms: float


@dataclass(frozen=True)
class TepMetrics:
    simult_pct: float
    total_cost_rel: float
    load_shed: float
    curtailment: float
    capacity_invested: float
    runtime_ms: float


@dataclass(frozen=True)
class PerfCurve:
    """Step curve: ``frac_solved[i]`` of all runs finished within ``runtime_ms[i]``."""

    runtime_ms: tuple
    frac_solved: tuple

    def __len__(self):
        return len(self.runtime_ms)

    def rows(self):
        return list(zip(self.runtime_ms, self.frac_solved))


def _values(sol):
    return sol.values if hasattr(sol, "values") else np.asarray(sol, dtype=float)


def _point(sol):
    values = _values(sol)
    if values is None or len(values) == 0:
        return None
    return values


def simultaneity_rate(sol, bess_vars) -> float:
    """
    Percentage of (unit, period) pairs with ``|pc * pd| > 1e-4``.

    Parameters:
    -----------
    sol : Solution or array
        Solution (or its value vector)
    bess_vars : list of BessVars
        Blocks to inspect
    """
    values = _values(sol)
    total = 0
    simultaneous = 0
    for bv in bess_vars:
        pc = values[[r.index for r in bv.p_c]]
        pd = values[[r.index for r in bv.p_d]]
        simultaneous += int(np.count_nonzero(np.abs(pc * pd) > SIMULTANEITY_THRESHOLD))
        total += bv.horizon
    if total == 0:
        return 0.0
    return 100.0 * simultaneous / total


def rmse(objective, horizon) -> float:
    """``sqrt(objective / T)`` for a sum-of-squares tracking objective."""
    return math.sqrt(max(objective, 0.0) / horizon)


def tracking_rmse(sol, assembly) -> float:
    """RMSE recomputed from the solution values of an :class:`SptAssembly`."""
    errors = assembly.tracking_errors(_values(sol))
    return float(np.sqrt(np.mean(errors**2)))


def relative(value, reference) -> float:
    """``value / reference``; 1 when both are zero, NaN when only the reference is."""
    if reference == 0.0:
        return 1.0 if value == 0.0 else math.nan
    return value / reference


def spt_metrics(sol, assembly, exc_rmse=None) -> SptMetrics:
    """
    Metrics of one SPT solve; ``rmse_rel`` is NaN without the Exc reference.

    A solve without a point (infeasible, or stopped before an incumbent)
    gives NaN for every metric except the runtime.
    """
    runtime_ms = getattr(sol, "runtime_ms", math.nan)
    if _point(sol) is None or not math.isfinite(getattr(sol, "objective", math.nan)):
        return SptMetrics(math.nan, math.nan, math.nan, runtime_ms)
    value = rmse(sol.objective, assembly.horizon)
    rel = relative(value, exc_rmse) if exc_rmse is not None else math.nan
    return SptMetrics(simultaneity_rate(sol, assembly.bess_vars), value, rel, runtime_ms)


def tep_metrics(sol, assembly, exc_cost=None) -> TepMetrics:
    """
    Metrics of one TEP solve.

    Load shedding and curtailment are energy sums over every day and hour;
    invested capacity counts each built line at its candidate capacity.
    A solve without a point gives NaN for every metric except the runtime.
    """
    runtime_ms = getattr(sol, "runtime_ms", math.nan)
    values = _point(sol)
    if values is None:
        return TepMetrics(math.nan, math.nan, math.nan, math.nan, math.nan, runtime_ms)
    load_shed = sum(values[s.index] for day in assembly.shed for hour in day for s in hour.values())
    curtailment = sum(values[s.index] for day in assembly.spill for hour in day for s in hour.values())
    corridors = assembly.instance.dataset.corridors
    invested = sum(
        c.candidate_capacity * n for c, n in zip(corridors, assembly.built_lines(values))
    )
    objective = getattr(sol, "objective", math.nan)
    rel = relative(objective, exc_cost) if exc_cost is not None else math.nan
    return TepMetrics(
        simultaneity_rate(values, assembly.all_bess_vars()),
        rel,
        float(load_shed),
        float(curtailment),
        float(invested),
        runtime_ms,
    )


def perf_curve(runtimes, statuses) -> PerfCurve:
    """
    Cumulative fraction of runs solved against runtime.

    Only runs with status ``optimal`` count as solved; the denominator is
    every run. Equal runtimes collapse into one step.
    """
    runtimes = list(runtimes)
    statuses = [getattr(s, "value", s) for s in statuses]
    total = len(runtimes)
    solved = sorted(t for t, s in zip(runtimes, statuses) if s == "optimal")
    if not solved:
        return PerfCurve((), ())
    times, counts = np.unique(np.asarray(solved, dtype=float), return_counts=True)
    fractions = np.cumsum(counts) / total
    return PerfCurve(tuple(float(t) for t in times), tuple(float(f) for f in fractions))
