"""
Best-bound branch-and-bound over binary variables.

Each node is a pair of bound vectors; children are evaluated when created, so
every queued node carries its relaxation value. Nodes leave the queue in
``(bound, node_id)`` order, which makes the search deterministic.

Relaxations include the problem's user cuts. A child starts from its
parent's final simplex basis (linear objectives) or ADMM iterate (quadratic
objectives). Bound vectors whose row activity range already excludes a row
are rejected before any solve.
"""

import heapq
import itertools
import logging
import math
import time
from dataclasses import dataclass
from typing import Any

import numpy as np

from .admm import AdmmQpSolver
from .base import SolveConfig
from .base import SolveStatus
from .base import Solution
from .simplex import RevisedSimplex

logger = logging.getLogger(__name__)

INTEGRALITY_TOL = 1e-6
ACTIVITY_TOL = 1e-9
HEURISTIC_EVERY = 10


@dataclass
class _Node:
    bound: float
    lower: np.ndarray
    upper: np.ndarray
    x: np.ndarray
    depth: int
    warm: Any = None


@dataclass
class _Relaxed:
    status: SolveStatus
    x: np.ndarray | None = None
    objective: float = math.nan
    duals: np.ndarray | None = None
    bound_duals: np.ndarray | None = None
    warm: Any = None


class _Relaxation:
    """Relaxation oracle: revised simplex for linear objectives, ADMM otherwise."""

    def __init__(self, arrays, config, deadline):
        self.arrays = arrays
        self.config = config
        self.deadline = deadline
        self.iterations = 0
        if arrays.has_quadratic:
            self._qp = AdmmQpSolver(arrays, config)
            self._lp = None
        else:
            self._qp = None
            self._lp = RevisedSimplex(arrays.matrix, arrays.senses, arrays.rhs, arrays.c, config)

        matrix = arrays.matrix.tocsr()
        self._a_pos = matrix.maximum(0.0)
        self._a_neg = matrix.minimum(0.0)
        self._a_pos.eliminate_zeros()
        self._a_neg.eliminate_zeros()
        self._row_lower = arrays.row_lower
        self._row_upper = arrays.row_upper

    def rows_excluded(self, lower, upper):
        """True when some row cannot be met by any point within the bounds."""
        if np.any(lower > upper):
            return True
        if self._a_pos.shape[0] == 0:
            return False
        min_act = self._a_pos @ lower + self._a_neg @ upper
        max_act = self._a_pos @ upper + self._a_neg @ lower
        tol_up = ACTIVITY_TOL * (1.0 + np.abs(self._row_upper))
        tol_lo = ACTIVITY_TOL * (1.0 + np.abs(self._row_lower))
        with np.errstate(invalid="ignore"):
            return bool(
                np.any(min_act > self._row_upper + tol_up)
                or np.any(max_act < self._row_lower - tol_lo)
            )

    def __call__(self, lower, upper, warm=None):
        if self.rows_excluded(lower, upper):
            return _Relaxed(SolveStatus.INFEASIBLE)
        if self._qp is not None:
            result = self._qp.solve(lower, upper, self.deadline, warm=warm)
            y = result.y
            m = self._qp.m_rows
            duals, bound_duals, state = y[:m], y[m:], result.iterate
        else:
            result = self._lp.solve(lower, upper, warm=warm, deadline=self.deadline)
            duals, bound_duals, state = result.duals, result.bound_duals, result.basis
        self.iterations += result.iterations
        objective = result.objective
        if math.isfinite(objective):
            objective += self.arrays.c0
        return _Relaxed(result.status, result.x, objective, duals, bound_duals, state)


def relative_gap(incumbent, bound):
    """``(incumbent - bound) / max(|incumbent|, 1e-10)``."""
    return (incumbent - bound) / max(abs(incumbent), 1e-10)


def _most_fractional(x, binaries):
    if len(binaries) == 0:
        return None
    frac = np.abs(x[binaries] - np.round(x[binaries]))
    k = int(np.argmax(frac))
    if frac[k] <= INTEGRALITY_TOL:
        return None
    return int(binaries[k])


class BranchAndBound:
    """
    Branch-and-bound driver for one problem.

    Parameters:
    -----------
    arrays : ProblemArrays
        Problem data including the binary index set and any user cuts
    config : SolveConfig
        ``mip_rel_gap`` for termination, ``max_iterations`` as node limit
    name : str
        Used in log messages
    n_rows : int, optional
        Number of model rows; duals of the rows after it (user cuts) are
        not reported
    """

    def __init__(self, arrays, config, name="problem", n_rows=None):
        self.arrays = arrays
        self.config = config
        self.name = name
        self.n_rows = arrays.shape[0] if n_rows is None else n_rows
        self.binaries = np.asarray(arrays.binaries, dtype=int)
        self.incumbent = math.inf
        self.incumbent_x = None
        self.incumbent_duals = (None, None)
        self.best_bound = -math.inf
        self.bound_history = []
        self.nodes = 0
        self._ids = itertools.count()
        self._heap = []

    def _trace(self, message, *args):
        if self.config.verbose:
            logger.info("B&B %s: " + message, self.name, *args)

    def _try_incumbent(self, rounded, lower, upper, warm=None):
        """Fix binaries to ``rounded`` and solve; keep the point if better."""
        fixed_lower = lower.copy()
        fixed_upper = upper.copy()
        fixed_lower[self.binaries] = np.maximum(rounded, lower[self.binaries])
        fixed_upper[self.binaries] = np.minimum(rounded, upper[self.binaries])
        result = self.relax(fixed_lower, fixed_upper, warm)
        if result.status is not SolveStatus.OPTIMAL:
            return result.status
        if result.objective < self.incumbent:
            x_fix = result.x.copy()
            x_fix[self.binaries] = fixed_lower[self.binaries]
            self.incumbent = result.objective
            self.incumbent_x = x_fix
            self.incumbent_duals = (result.duals[: self.n_rows], result.bound_duals)
            self._trace("incumbent %.10g at node %d", result.objective, self.nodes)
        return result.status

    def _round(self, x, lower, upper, warm):
        """Rounding heuristics: nearest integer, then one for every positive binary."""
        values = x[self.binaries]
        nearest = np.round(values)
        self._try_incumbent(nearest, lower, upper, warm)
        up = (values > INTEGRALITY_TOL).astype(float)
        if not np.array_equal(up, nearest):
            self._try_incumbent(up, lower, upper, warm)

    def _prunable(self, bound):
        return math.isfinite(self.incumbent) and (
            relative_gap(self.incumbent, bound) <= self.config.mip_rel_gap
        )

    def _record_bound(self):
        frontier = self._heap[0][0] if self._heap else self.incumbent
        current = min(frontier, self.incumbent)
        if current > self.best_bound:
            self.best_bound = current
        self.bound_history.append((self.best_bound, self.incumbent))

    def _evaluate(self, lower, upper, parent_bound, depth, warm):
        """Solve a node; queue it, turn it into an incumbent, or drop it."""
        self.nodes += 1
        result = self.relax(lower, upper, warm)
        if result.status is not SolveStatus.OPTIMAL:
            return result.status
        bound = max(result.objective, parent_bound)
        if self._prunable(bound):
            return result.status
        if _most_fractional(result.x, self.binaries) is None:
            return self._try_incumbent(np.round(result.x[self.binaries]), lower, upper, result.warm)
        if self.nodes % HEURISTIC_EVERY == 0:
            self._round(result.x, lower, upper, result.warm)
        node = _Node(bound, lower, upper, result.x, depth, result.warm)
        heapq.heappush(self._heap, (bound, next(self._ids), node))
        return result.status

    def run(self, deadline=None):
        arrays = self.arrays
        self.relax = _Relaxation(arrays, self.config, deadline)
        lower = arrays.lower.copy()
        upper = arrays.upper.copy()

        self.nodes = 1
        root = self.relax(lower, upper)
        if root.status is not SolveStatus.OPTIMAL:
            self._trace("root %s", root.status.value)
            return root.status, "root relaxation " + root.status.value
        self.best_bound = root.objective
        self.bound_history.append((root.objective, self.incumbent))
        self._trace("root bound %.10g", root.objective)

        if _most_fractional(root.x, self.binaries) is None:
            status = self._try_incumbent(np.round(root.x[self.binaries]), lower, upper, root.warm)
            self._record_bound()
            return status, ""
        self._round(root.x, lower, upper, root.warm)
        heapq.heappush(
            self._heap,
            (root.objective, next(self._ids), _Node(root.objective, lower, upper, root.x, 0, root.warm)),
        )

        while self._heap:
            bound, _, node = self._heap[0]
            if self._prunable(bound):
                self.best_bound = max(self.best_bound, min(bound, self.incumbent))
                self.bound_history.append((self.best_bound, self.incumbent))
                return SolveStatus.OPTIMAL, ""
            if self.nodes >= self.config.max_iterations:
                return SolveStatus.LIMIT_REACHED, "node limit"
            if deadline is not None and time.perf_counter() > deadline:
                return SolveStatus.LIMIT_REACHED, "time limit"
            heapq.heappop(self._heap)

            j = _most_fractional(node.x, self.binaries)
            self._trace("branch x%d=%.6f depth %d bound %.10g", j, node.x[j], node.depth, bound)
            down_upper = node.upper.copy()
            down_upper[j] = 0.0
            up_lower = node.lower.copy()
            up_lower[j] = 1.0
            for child_lower, child_upper in ((node.lower, down_upper), (up_lower, node.upper)):
                status = self._evaluate(child_lower, child_upper, bound, node.depth + 1, node.warm)
                if status is SolveStatus.LIMIT_REACHED:
                    return status, "relaxation limit"
            self._record_bound()

        if self.incumbent_x is None:
            return SolveStatus.INFEASIBLE, "search exhausted without incumbent"
        return SolveStatus.OPTIMAL, ""


def solve_milp(p, cfg: SolveConfig | None = None) -> Solution:
    """
    Solve a mixed-binary program by branch-and-bound.

    Parameters:
    -----------
    p : Problem
        Linear or convex quadratic objective, any number of binaries; user
        cuts registered on ``p`` tighten every relaxation
    cfg : SolveConfig, optional
        ``mip_rel_gap`` sets the termination gap

    Returns:
    --------
    Solution
        With ``gap``, ``best_bound``, ``nodes`` and ``bound_history``
    """
    cfg = cfg or SolveConfig()
    start = time.perf_counter()
    deadline = start + cfg.time_limit if cfg.time_limit else None
    arrays = p.arrays(user_cuts=True)

    search = BranchAndBound(arrays, cfg, p.name, n_rows=p.num_constraints)
    status, message = search.run(deadline)
    runtime_ms = 1e3 * (time.perf_counter() - start)

    has_incumbent = search.incumbent_x is not None
    if status is SolveStatus.LIMIT_REACHED and not has_incumbent:
        logger.warning("solve_milp %s stopped without incumbent: %s", p.name, message)
    elif status is SolveStatus.LIMIT_REACHED:
        logger.warning("solve_milp %s stopped: %s", p.name, message)

    if has_incumbent and status in (SolveStatus.OPTIMAL, SolveStatus.LIMIT_REACHED):
        best_bound = min(search.best_bound, search.incumbent)
        gap = max(0.0, relative_gap(search.incumbent, best_bound))
        duals, bound_duals = search.incumbent_duals
        solution = Solution(
            status=status,
            objective=search.incumbent,
            values=search.incumbent_x,
            runtime_ms=runtime_ms,
            gap=gap,
            iterations=search.relax.iterations,
            nodes=search.nodes,
            best_bound=best_bound,
            duals=duals,
            bound_duals=bound_duals,
            bound_history=search.bound_history,
            message=message,
        )
    else:
        objective = -math.inf if status is SolveStatus.UNBOUNDED else math.nan
        solution = Solution(
            status=status,
            objective=objective,
            runtime_ms=runtime_ms,
            iterations=search.relax.iterations,
            nodes=search.nodes,
            bound_history=search.bound_history,
            message=message,
        )
    logger.debug(
        "solve_milp %s: %s obj=%s gap=%s nodes=%d",
        p.name, solution.status.value, solution.objective, solution.gap, solution.nodes,
    )
    return solution
