"""
Revised bounded-variable primal simplex on sparse data.

Rows ``A x + s = b`` carry one slack per row whose bounds encode the sense
(``<=``: s >= 0, ``>=``: s <= 0, ``=``: s = 0), so the working matrix is
``[A | I]`` and the all-slack basis is always available. Nonbasic variables
sit at a finite bound (or at zero when free).

The basis is held as a sparse LU factor (``scipy.sparse.linalg.splu``)
followed by product-form eta updates, one per pivot, and is refactored
every ``REFACTOR_EVERY`` pivots. Phase 1 is composite: from any starting
basis it minimizes the sum of bound violations of the basic variables, so
a solve can start from the basis of an earlier solve with different
bounds. Pricing is Dantzig until a run of degenerate pivots is seen, then
Bland's rule until the next non-degenerate step.
"""

import logging
import math
import time
from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from ..optmodel import Sense
from .base import SolveConfig
from .base import SolverInputError
from .base import SolveStatus
from .base import Solution

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-9
DUAL_TOL = 1e-9
DEGENERATE_SWITCH = 50
REFACTOR_EVERY = 64


@dataclass(frozen=True)
class BasisState:
    """
    Basis of a finished run, reusable as a warm start.

    ``basis`` holds one column index of ``[A | I]`` per row; ``at_upper``
    marks nonbasic columns resting at their upper bound.
    """

    basis: np.ndarray
    at_upper: np.ndarray


@dataclass
class LpResult:
    """Raw simplex outcome on array data."""

    status: SolveStatus
    x: np.ndarray
    objective: float
    duals: np.ndarray
    bound_duals: np.ndarray
    iterations: int
    message: str = ""
    basis: BasisState | None = None


class _Limit(Exception):
    pass


def _nonbasic_positions(lo, hi, at_upper):
    """Upper bound where flagged and finite, else the finite lower bound, else zero."""
    return np.where(
        at_upper & np.isfinite(hi),
        hi,
        np.where(np.isfinite(lo), lo, np.where(np.isfinite(hi), hi, 0.0)),
    )


class _BasisFactor:
    """Sparse LU of the basis matrix times the eta matrices of later pivots."""

    def __init__(self, columns, basis):
        self.lu = scipy.sparse.linalg.splu(columns[:, basis].tocsc())
        self.etas = []

    def ftran(self, v):
        """Solve ``B w = v``."""
        w = self.lu.solve(np.asarray(v, dtype=float))
        for r, alpha in self.etas:
            wr = w[r] / alpha[r]
            w -= wr * alpha
            w[r] = wr
        return w

    def btran(self, c):
        """Solve ``B^T w = c``."""
        w = np.array(c, dtype=float)
        for r, alpha in reversed(self.etas):
            w[r] = (w[r] - (alpha @ w - alpha[r] * w[r])) / alpha[r]
        return self.lu.solve(w, trans="T")

    def update(self, row, alpha):
        self.etas.append((row, alpha))


class RevisedSimplex:
    """
    Revised simplex for ``min c x`` over ``rows(A x) sense rhs`` and
    ``lower <= x <= upper``.

    The matrix is assembled once; :meth:`solve` takes the bounds of each
    run so that branch-and-bound nodes can share one instance and pass the
    parent's :class:`BasisState` as a warm start.
    """

    def __init__(self, a, senses, rhs, c, config=None):
        self.config = config or SolveConfig()
        a = scipy.sparse.csc_matrix(a, dtype=float)
        self.m, self.n = a.shape
        m, n = self.m, self.n
        self.b = np.asarray(rhs, dtype=float)
        self.cost = np.concatenate([np.asarray(c, dtype=float), np.zeros(m)])

        self.slack_lo = np.zeros(m)
        self.slack_hi = np.zeros(m)
        for i, sense in enumerate(senses):
            sense = Sense(sense)
            if sense is Sense.LE:
                self.slack_hi[i] = np.inf
            elif sense is Sense.GE:
                self.slack_lo[i] = -np.inf

        if m:
            self.columns = scipy.sparse.hstack(
                [a, scipy.sparse.identity(m, format="csc")], format="csc"
            )
        else:
            self.columns = a
        self.rows = self.columns.T.tocsr()
        self.n_cols = n + m
        self.iterations = 0

    # linear algebra helpers

    def _column(self, j):
        col = np.zeros(self.m)
        start, stop = self.columns.indptr[j], self.columns.indptr[j + 1]
        col[self.columns.indices[start:stop]] = self.columns.data[start:stop]
        return col

    def _reduced_costs(self, cost_basic, cost):
        y = self.factor.btran(cost_basic)
        d = cost - self.rows @ y
        d[self.is_basic] = 0.0
        return y, d

    def _recompute_basics(self):
        xn = self.x.copy()
        xn[self.basis] = 0.0
        self.x[self.basis] = self.factor.ftran(self.b - self.columns @ xn)

    def _set_basis(self, basis, at_upper):
        self.basis = np.asarray(basis, dtype=int).copy()
        self.is_basic = np.zeros(self.n_cols, dtype=bool)
        self.is_basic[self.basis] = True
        self.x = _nonbasic_positions(self.lo, self.hi, np.asarray(at_upper, dtype=bool))
        self.factor = _BasisFactor(self.columns, self.basis)
        self._recompute_basics()

    def _slack_basis(self, at_upper=None):
        if at_upper is None:
            at_upper = self.cost < 0.0
        self._set_basis(np.arange(self.n, self.n_cols), at_upper)

    def _refactor(self):
        try:
            self.factor = _BasisFactor(self.columns, self.basis)
        except RuntimeError:
            logger.debug("singular basis after %d pivots, restarting from slacks", self.iterations)
            at_upper = self.x >= self.hi
            self._slack_basis(at_upper)
            return
        self._recompute_basics()

    def _check_limits(self):
        if self.iterations >= self.config.max_iterations:
            raise _Limit("iteration limit")
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise _Limit("time limit")

    # core loop

    def _violations(self):
        xb = self.x[self.basis]
        lo_b, hi_b = self.lo[self.basis], self.hi[self.basis]
        tol = self.config.lp_feas_tol
        below = xb < lo_b - tol * (1.0 + np.abs(lo_b))
        above = xb > hi_b + tol * (1.0 + np.abs(hi_b))
        return below, above

    def _entering(self, d, bland):
        x, lo, hi = self.x, self.lo, self.hi
        candidates = ~self.is_basic & (lo < hi)
        up = candidates & (d < -DUAL_TOL) & (x < hi)
        down = candidates & (d > DUAL_TOL) & (x > lo)
        score = np.where(up, -d, 0.0) + np.where(down, d, 0.0)
        if not np.any(score > 0.0):
            return None, 0.0
        if bland:
            j = int(np.flatnonzero(score > 0.0)[0])
        else:
            j = int(np.argmax(score))
        return j, (1.0 if d[j] < 0.0 else -1.0)

    def _ratio_test(self, j, g, below, above, bland):
        """
        Step length along ``x_B(t) = x_B - t * g``.

        Returns ``(theta, row, bound)``; ``row`` is -1 for a bound flip of
        the entering column. Basics outside their bounds stop at the first
        bound they reach.
        """
        theta = self.hi[j] - self.lo[j]
        xb = self.x[self.basis]
        lo_b, hi_b = self.lo[self.basis], self.hi[self.basis]
        dec = g > PIVOT_TOL
        inc = g < -PIVOT_TOL
        with np.errstate(invalid="ignore", divide="ignore"):
            to_lo = np.where(dec & ~below & ~above, (xb - lo_b) / g, np.inf)
            to_lo = np.where(inc & below, (lo_b - xb) / -g, to_lo)
            to_hi = np.where(inc & ~below & ~above, (hi_b - xb) / -g, np.inf)
            to_hi = np.where(dec & above, (xb - hi_b) / g, to_hi)
        to_lo = np.maximum(np.nan_to_num(to_lo, nan=np.inf), 0.0)
        to_hi = np.maximum(np.nan_to_num(to_hi, nan=np.inf), 0.0)
        ratios = np.minimum(to_lo, to_hi)

        r_min = ratios.min() if self.m else np.inf
        if not r_min < theta:
            return theta, -1, None
        ties = np.flatnonzero(ratios <= r_min + 1e-12)
        if bland:
            row = int(ties[np.argmin(self.basis[ties])])
        else:
            row = int(ties[np.argmax(np.abs(g[ties]))])
        leaving = self.basis[row]
        bound = self.lo[leaving] if to_lo[row] <= to_hi[row] else self.hi[leaving]
        return r_min, row, bound

    def _run(self):
        degenerate = 0
        while True:
            self._check_limits()
            below, above = self._violations()
            phase1 = bool(below.any() or above.any())
            if phase1:
                cost_basic = np.where(below, -1.0, np.where(above, 1.0, 0.0))
                cost = np.zeros(self.n_cols)
            else:
                cost = self.cost
                cost_basic = cost[self.basis]
            _, d = self._reduced_costs(cost_basic, cost)

            bland = degenerate > DEGENERATE_SWITCH
            j, direction = self._entering(d, bland)
            if j is None:
                if self.factor.etas:
                    self._refactor()
                    continue
                return SolveStatus.INFEASIBLE if phase1 else SolveStatus.OPTIMAL

            g = direction * self.factor.ftran(self._column(j))
            theta, row, bound = self._ratio_test(j, g, below, above, bland)
            if math.isinf(theta):
                if phase1:
                    raise _Limit("phase 1 direction without a blocking bound")
                return SolveStatus.UNBOUNDED

            self.iterations += 1
            degenerate = degenerate + 1 if theta <= 1e-12 else 0
            if theta > 0.0:
                self.x[self.basis] -= theta * g
            if row < 0:
                self.x[j] = self.hi[j] if direction > 0 else self.lo[j]
                continue

            leaving = self.basis[row]
            self.x[j] += direction * theta
            self.x[leaving] = bound
            self.basis[row] = j
            self.is_basic[leaving] = False
            self.is_basic[j] = True
            self.factor.update(row, direction * g)
            if len(self.factor.etas) >= REFACTOR_EVERY:
                self._refactor()

    def _start(self, warm):
        if warm is not None:
            basis = np.asarray(warm.basis, dtype=int)
            usable = (
                basis.shape == (self.m,)
                and len(warm.at_upper) == self.n_cols
                and len(np.unique(basis)) == self.m
                and (self.m == 0 or 0 <= basis.min() and basis.max() < self.n_cols)
            )
            if usable:
                try:
                    self._set_basis(basis, np.asarray(warm.at_upper, dtype=bool))
                    return
                except RuntimeError:
                    logger.debug("warm-start basis is singular, starting from slacks")
        self._slack_basis()

    def solve(self, lower, upper, warm: BasisState | None = None, deadline=None) -> LpResult:
        """
        Minimize over the given variable bounds.

        Parameters:
        -----------
        lower, upper : numpy.ndarray
            Variable bounds of this run
        warm : BasisState, optional
            Basis of an earlier run on the same rows
        deadline : float, optional
            ``time.perf_counter()`` value after which the run stops
        """
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if np.any(lower > upper):
            return LpResult(SolveStatus.INFEASIBLE, np.zeros(self.n), math.nan,
                            np.zeros(self.m), np.zeros(self.n), 0, "crossing bounds")
        self.deadline = deadline
        self.iterations = 0
        self.lo = np.concatenate([lower, self.slack_lo])
        self.hi = np.concatenate([upper, self.slack_hi])
        if self.m == 0:
            return self._solve_unconstrained()

        message = ""
        try:
            self._start(warm)
            status = self._run()
        except _Limit as limit:
            status = SolveStatus.LIMIT_REACHED
            message = str(limit)
        return self._result(status, message)

    def _solve_unconstrained(self):
        c = self.cost[: self.n]
        x = _nonbasic_positions(self.lo[: self.n], self.hi[: self.n], c < 0.0)
        unbounded = ((c < 0.0) & np.isinf(self.hi[: self.n])) | (
            (c > 0.0) & np.isinf(self.lo[: self.n])
        )
        status = SolveStatus.UNBOUNDED if unbounded.any() else SolveStatus.OPTIMAL
        objective = -math.inf if unbounded.any() else float(c @ x)
        return LpResult(status, x, objective, np.zeros(0), -c.copy(), 0,
                        basis=BasisState(np.zeros(0, dtype=int), x >= self.hi[: self.n]))

    def _result(self, status, message=""):
        n = self.n
        x = self.x[:n].copy()
        if status is SolveStatus.OPTIMAL:
            x = np.clip(x, self.lo[:n], self.hi[:n])
        y, d = self._reduced_costs(self.cost[self.basis], self.cost)
        objective = float(self.cost[:n] @ x) if status is not SolveStatus.INFEASIBLE else math.nan
        if status is SolveStatus.UNBOUNDED:
            objective = -math.inf
        at_upper = ~self.is_basic & (self.x >= self.hi)
        return LpResult(
            status=status,
            x=x,
            objective=objective,
            duals=-y,
            bound_duals=-d[:n],
            iterations=self.iterations,
            message=message,
            basis=BasisState(self.basis.copy(), at_upper),
        )


def solve_lp_arrays(
    arrays, lower=None, upper=None, config=None, deadline=None, warm=None
) -> LpResult:
    """Run the simplex on ``ProblemArrays`` with optional replacement bounds."""
    lower = arrays.lower if lower is None else lower
    upper = arrays.upper if upper is None else upper
    simplex = RevisedSimplex(arrays.matrix, arrays.senses, arrays.rhs, arrays.c, config)
    return simplex.solve(lower, upper, warm=warm, deadline=deadline)


def solve_lp(p, cfg: SolveConfig | None = None) -> Solution:
    """
    Solve a linear program with the revised bounded-variable simplex.

    Parameters:
    -----------
    p : Problem
        Problem without binaries and without quadratic objective terms
    cfg : SolveConfig, optional
        Tolerances and limits

    Returns:
    --------
    Solution
        Vertex solution when optimal
    """
    cfg = cfg or SolveConfig()
    if p.is_mip:
        raise SolverInputError(f"solve_lp: problem {p.name!r} has binary variables")
    if p.is_quadratic:
        raise SolverInputError(f"solve_lp: problem {p.name!r} has a quadratic objective")

    start = time.perf_counter()
    deadline = start + cfg.time_limit if cfg.time_limit else None
    arrays = p.arrays()
    result = solve_lp_arrays(arrays, config=cfg, deadline=deadline)
    runtime_ms = 1e3 * (time.perf_counter() - start)

    objective = result.objective
    if math.isfinite(objective):
        objective += arrays.c0
    logger.debug(
        "solve_lp %s: %s obj=%s iterations=%d", p.name, result.status.value, objective,
        result.iterations,
    )
    if result.status is SolveStatus.LIMIT_REACHED:
        logger.warning("solve_lp %s stopped: %s", p.name, result.message)
    return Solution(
        status=result.status,
        objective=objective,
        values=result.x,
        runtime_ms=runtime_ms,
        iterations=result.iterations,
        duals=result.duals,
        bound_duals=result.bound_duals,
        message=result.message,
    )
