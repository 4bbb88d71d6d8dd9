"""
Operator-splitting (ADMM) solver for convex quadratic programs.

Solves ``min 0.5 x'Px + q'x`` subject to ``l <= A x <= u`` where the
constraint rows of the problem are stacked on top of an identity block that
carries the variable bounds. The KKT matrix ``P + sigma I + A' diag(rho) A``
depends on neither ``l`` nor ``u``, so one Cholesky factorization serves every
bound change, which is how branch-and-bound re-solves nodes; a node can also
start from the final iterate of its parent.

The step size ``rho`` is multiplied by ``SolveConfig.rho_eq_scale`` on
equality rows (``l == u``), whose multipliers otherwise converge slowly.

Once the ADMM residuals are small an active-set polish solves the reduced
KKT system directly; the polished point is accepted when its KKT residuals
are within ``POLISH_KKT_TOL``.
"""

import logging
import math
import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .base import SolveConfig
from .base import SolverInputError
from .base import SolveStatus
from .base import Solution

logger = logging.getLogger(__name__)

SIGMA = 1e-6
ALPHA = 1.6
INFEASIBILITY_TOL = 1e-5
POLISH_TRIGGER = 1e-4
POLISH_KKT_TOL = 1e-6
POLISH_DELTA = 1e-9
POLISH_REFINE_STEPS = 5
CHECK_EVERY = 10
POLISH_EVERY = 100


@dataclass(frozen=True)
class AdmmIterate:
    """Scaled ADMM state ``(x, z, y)`` that can seed a later solve."""

    x: np.ndarray
    z: np.ndarray
    y: np.ndarray


@dataclass
class QpResult:
    """Raw ADMM outcome on array data (``y`` covers rows then bounds)."""

    status: SolveStatus
    x: np.ndarray
    objective: float
    y: np.ndarray
    iterations: int
    polished: bool = False
    message: str = ""
    iterate: AdmmIterate | None = None


def _norm(v):
    return float(np.max(np.abs(v), initial=0.0))


class AdmmQpSolver:
    """
    ADMM solver bound to one problem's matrices.

    Parameters:
    -----------
    arrays : ProblemArrays
        Problem data, densified here; ``q`` is the symmetric quadratic form
        with ``x @ q @ x`` equal to the quadratic objective part
    config : SolveConfig, optional
        Tolerances, iteration limit, penalty ``rho`` and ``rho_eq_scale``
    """

    def __init__(self, arrays, config=None):
        self.config = config or SolveConfig()
        self.arrays = arrays
        a_rows = np.asarray(arrays.a, dtype=float)
        self.m_rows, self.n = a_rows.shape
        n = self.n

        self.p = 2.0 * np.asarray(arrays.q, dtype=float)
        self.q = np.asarray(arrays.c, dtype=float)
        self.a = np.vstack([a_rows, np.eye(n)])
        self.row_lower = arrays.row_lower
        self.row_upper = arrays.row_upper

        # row equilibration and objective scaling
        row_norm = np.max(np.abs(self.a), axis=1, initial=0.0)
        self.d = np.where(row_norm > 0.0, 1.0 / np.where(row_norm > 0.0, row_norm, 1.0), 1.0)
        self.a_s = self.d[:, None] * self.a
        self.cost_scale = 1.0 / max(1.0, _norm(self.q), _norm(self.p))
        self.p_s = self.cost_scale * self.p
        self.q_s = self.cost_scale * self.q

        rho = self.config.rho
        self.rho = np.full(self.m_rows + n, rho)
        eq_rows = np.flatnonzero(self.row_lower == self.row_upper)
        self.rho[eq_rows] = self.config.rho_eq_scale * rho

        kkt = self.p_s + SIGMA * np.eye(n) + self.a_s.T @ (self.rho[:, None] * self.a_s)
        self.factor = scipy.linalg.cho_factor(kkt)

    # bounds and residuals

    def _bounds(self, lower, upper):
        lower = self.arrays.lower if lower is None else np.asarray(lower, dtype=float)
        upper = self.arrays.upper if upper is None else np.asarray(upper, dtype=float)
        return (
            np.concatenate([self.row_lower, lower]),
            np.concatenate([self.row_upper, upper]),
        )

    def _unscale(self, y):
        return self.d * y / self.cost_scale

    def _objective(self, x):
        return float(0.5 * x @ self.p @ x + self.q @ x)

    def kkt_residuals(self, x, y, l, u):
        """
        Return (primal, dual, complementarity) residuals in original units.

        ``y`` follows the sign convention positive at an active upper side.
        """
        ax = self.a @ x
        primal = max(_norm(np.maximum(l - ax, 0.0)), _norm(np.maximum(ax - u, 0.0)))
        dual = _norm(self.p @ x + self.q + self.a.T @ y)
        slack_up = np.where(np.isfinite(u), u - ax, np.inf)
        slack_lo = np.where(np.isfinite(l), ax - l, np.inf)
        comp_up = np.where(y > 0.0, y * np.minimum(slack_up, 1e300), 0.0)
        comp_lo = np.where(y < 0.0, -y * np.minimum(slack_lo, 1e300), 0.0)
        comp = max(_norm(comp_up), _norm(comp_lo))
        return primal, dual, comp

    def _dual_scale(self, x, y):
        return max(1.0, _norm(self.q), _norm(self.p @ x), _norm(self.a.T @ y))

    # polish

    def _polish(self, x, y, l, u):
        ax = self.a @ x
        upper_active = np.isfinite(u) & ((u - ax < y) | (l == u))
        lower_active = np.isfinite(l) & (ax - l < -y) & ~upper_active
        active = np.flatnonzero(upper_active | lower_active)
        target = np.where(upper_active, u, l)[active]

        n, k = self.n, len(active)
        a_act = self.a[active]
        kkt = np.zeros((n + k, n + k))
        kkt[:n, :n] = self.p
        kkt[:n, n:] = a_act.T
        kkt[n:, :n] = a_act
        rhs = np.concatenate([-self.q, target])
        reg = kkt.copy()
        reg[:n, :n] += POLISH_DELTA * np.eye(n)
        reg[n:, n:] -= POLISH_DELTA * np.eye(k)
        try:
            lu = scipy.linalg.lu_factor(reg)
        except (ValueError, np.linalg.LinAlgError):
            return None
        sol = scipy.linalg.lu_solve(lu, rhs)
        for _ in range(POLISH_REFINE_STEPS):
            sol = sol + scipy.linalg.lu_solve(lu, rhs - kkt @ sol)
        if not np.all(np.isfinite(sol)):
            return None

        x_pol = sol[:n]
        y_pol = np.zeros_like(y)
        y_pol[active] = sol[n:]
        # active-set sign check; a wrong sign means the guessed set is not optimal
        if np.any(y_pol[upper_active] < -POLISH_KKT_TOL) or np.any(
            y_pol[lower_active] > POLISH_KKT_TOL
        ):
            return None
        primal, dual, comp = self.kkt_residuals(x_pol, y_pol, l, u)
        scale = self._dual_scale(x_pol, y_pol)
        if primal <= POLISH_KKT_TOL and dual <= POLISH_KKT_TOL * scale and comp <= POLISH_KKT_TOL * scale:
            return x_pol, y_pol
        return None

    # main loop

    def solve(self, lower=None, upper=None, deadline=None, warm=None) -> QpResult:
        """
        Solve with optional replacement variable bounds.

        ``warm`` is the :class:`AdmmIterate` of an earlier solve on the same
        matrices; its ``z`` is projected onto the new bounds.
        """
        cfg = self.config
        l, u = self._bounds(lower, upper)
        if np.any(l > u):
            return QpResult(SolveStatus.INFEASIBLE, np.zeros(self.n), math.nan,
                            np.zeros(len(l)), 0, message="crossing bounds")
        l_s, u_s = self.d * l, self.d * u
        rho = self.rho
        n = self.n

        if warm is not None and warm.x.shape == (n,) and warm.y.shape == l.shape:
            x = warm.x.copy()
            z = np.clip(warm.z, l_s, u_s)
            y = warm.y.copy()
        else:
            x = np.clip(np.zeros(n), l[self.m_rows :], u[self.m_rows :])
            z = np.clip(self.a_s @ x, l_s, u_s)
            y = np.zeros(len(l))
        iteration = 0
        polish_after = 0
        while True:
            if iteration >= cfg.max_iterations:
                return self._finish(
                    SolveStatus.LIMIT_REACHED, x, self._unscale(y), iteration, "iteration limit"
                )
            if deadline is not None and time.perf_counter() > deadline:
                return self._finish(
                    SolveStatus.LIMIT_REACHED, x, self._unscale(y), iteration, "time limit"
                )
            iteration += 1

            x_prev, y_prev = x, y
            rhs = SIGMA * x - self.q_s + self.a_s.T @ (rho * z - y)
            x_tilde = scipy.linalg.cho_solve(self.factor, rhs)
            z_tilde = self.a_s @ x_tilde
            x = ALPHA * x_tilde + (1.0 - ALPHA) * x
            z_relaxed = ALPHA * z_tilde + (1.0 - ALPHA) * z
            z = np.clip(z_relaxed + y / rho, l_s, u_s)
            y = y + rho * (z_relaxed - z)

            if iteration % CHECK_EVERY:
                continue

            y_orig = self._unscale(y)
            z_orig = z / self.d
            ax = self.a @ x
            r_prim = _norm(ax - z_orig)
            r_dual = _norm(self.p @ x + self.q + self.a.T @ y_orig)
            prim_scale = max(_norm(ax), _norm(z_orig))
            dual_scale = self._dual_scale(x, y_orig)

            if (
                r_prim <= POLISH_TRIGGER * max(1.0, prim_scale)
                and r_dual <= POLISH_TRIGGER * dual_scale
                and iteration >= polish_after
            ):
                polished = self._polish(x, y_orig, l, u)
                if polished is not None:
                    x_pol, y_pol = polished
                    x_pol = np.clip(x_pol, l[self.m_rows :], u[self.m_rows :])
                    return self._finish(
                        SolveStatus.OPTIMAL, x_pol, y_pol, iteration, polished=True,
                        iterate=AdmmIterate(x, z, y),
                    )
                polish_after = iteration + POLISH_EVERY

            if (
                r_prim <= cfg.qp_primal_tol * max(1.0, prim_scale)
                and r_dual <= cfg.qp_dual_tol * dual_scale
            ):
                iterate = AdmmIterate(x, z, y)
                x = np.clip(x, l[self.m_rows :], u[self.m_rows :])
                return self._finish(SolveStatus.OPTIMAL, x, y_orig, iteration, iterate=iterate)

            status = self._certificate(x - x_prev, y - y_prev, l_s, u_s)
            if status is not None:
                return self._finish(status, x, y_orig, iteration, "infeasibility certificate")

    def _certificate(self, dx, dy, l_s, u_s):
        norm_dy = _norm(dy)
        if norm_dy > 0.0:
            eps = INFEASIBILITY_TOL * norm_dy
            dy_up = np.maximum(dy, 0.0)
            dy_lo = np.minimum(dy, 0.0)
            finite = (
                np.all(dy_up[~np.isfinite(u_s)] <= eps)
                and np.all(dy_lo[~np.isfinite(l_s)] >= -eps)
            )
            if finite and _norm(self.a_s.T @ dy) <= eps:
                support = float(
                    np.sum(np.where(np.isfinite(u_s), u_s * dy_up, 0.0))
                    + np.sum(np.where(np.isfinite(l_s), l_s * dy_lo, 0.0))
                )
                if support < -eps:
                    return SolveStatus.INFEASIBLE

        norm_dx = _norm(dx)
        if norm_dx > 0.0:
            eps = INFEASIBILITY_TOL * norm_dx
            if _norm(self.p_s @ dx) <= eps and float(self.q_s @ dx) < -eps:
                adx = self.a_s @ dx
                ok = np.where(
                    np.isfinite(u_s) & np.isfinite(l_s),
                    np.abs(adx) <= eps,
                    np.where(np.isfinite(u_s), adx <= eps, np.where(np.isfinite(l_s), adx >= -eps, True)),
                )
                if np.all(ok):
                    return SolveStatus.UNBOUNDED
        return None

    def _finish(self, status, x, y, iterations, message="", polished=False, iterate=None):
        if status is SolveStatus.INFEASIBLE:
            objective = math.nan
        elif status is SolveStatus.UNBOUNDED:
            objective = -math.inf
        else:
            objective = self._objective(x)
        return QpResult(status, x, objective, y, iterations, polished, message, iterate)


def solve_qp(p, cfg: SolveConfig | None = None) -> Solution:
    """
    Solve a convex quadratic program.

    Parameters:
    -----------
    p : Problem
        Problem without binaries; the quadratic part must be PSD, which holds
        for objectives built with ``add_sum_of_squares``
    cfg : SolveConfig, optional
        Tolerances, penalty and limits

    Returns:
    --------
    Solution
        With ``duals`` (rows) and ``bound_duals`` when optimal
    """
    cfg = cfg or SolveConfig()
    if p.is_mip:
        raise SolverInputError(f"solve_qp: problem {p.name!r} has binary variables")

    start = time.perf_counter()
    deadline = start + cfg.time_limit if cfg.time_limit else None
    arrays = p.arrays()
    solver = AdmmQpSolver(arrays, cfg)
    result = solver.solve(deadline=deadline)
    runtime_ms = 1e3 * (time.perf_counter() - start)

    objective = result.objective
    if math.isfinite(objective):
        objective += arrays.c0
    m = solver.m_rows
    logger.debug(
        "solve_qp %s: %s obj=%s iterations=%d polished=%s",
        p.name, result.status.value, objective, result.iterations, result.polished,
    )
    if result.status is SolveStatus.LIMIT_REACHED:
        logger.warning("solve_qp %s stopped: %s", p.name, result.message)
    return Solution(
        status=result.status,
        objective=objective,
        values=result.x,
        runtime_ms=runtime_ms,
        iterations=result.iterations,
        duals=result.y[:m],
        bound_duals=result.y[m:],
        message=result.message,
    )
