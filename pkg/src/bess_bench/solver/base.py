"""
Solver settings and results shared by the LP, QP and MILP solvers.
"""

import enum
import math
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace

import numpy as np

from ..optmodel import LinearExpr
from ..optmodel import VarRef


class SolverInputError(ValueError):
    """Problem does not meet the preconditions of the requested solver."""


class InvalidSolveConfigError(ValueError):
    """Non-positive tolerance or limit in a SolveConfig."""


class SolveStatus(str, enum.Enum):
    """Termination status of a solve."""

    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    LIMIT_REACHED = "limit-reached"


# Keys of the iconfig SOLVER section mapped to SolveConfig fields.
_CONFIG_KEYS = {
    "MIP_REL_GAP": "mip_rel_gap",
    "LP_FEAS_TOL": "lp_feas_tol",
    "QP_PRIMAL_TOL": "qp_primal_tol",
    "QP_DUAL_TOL": "qp_dual_tol",
    "MAX_ITERATIONS": "max_iterations",
    "TIME_LIMIT": "time_limit",
    "RHO": "rho",
    "RHO_EQ_SCALE": "rho_eq_scale",
    "VERBOSE": "verbose",
}


@dataclass(frozen=True)
class SolveConfig:
    """
    Solver tolerances and limits.

    ``max_iterations`` bounds simplex pivots, ADMM iterations and B&B nodes,
    each counted separately. ``time_limit`` is in seconds. ``rho_eq_scale``
    multiplies the ADMM step size on equality rows.
    """

    mip_rel_gap: float = 1e-3
    lp_feas_tol: float = 1e-8
    qp_primal_tol: float = 1e-8
    qp_dual_tol: float = 1e-8
    max_iterations: int = 200_000
    time_limit: float | None = None
    rho: float = 1.0
    rho_eq_scale: float = 1e3
    verbose: bool = False

    def __post_init__(self):
        positive = (
            "mip_rel_gap", "lp_feas_tol", "qp_primal_tol", "qp_dual_tol", "rho", "rho_eq_scale",
        )
        for name in positive:
            value = getattr(self, name)
            if not value > 0:
                raise InvalidSolveConfigError(f"SolveConfig.{name} must be > 0, got {value}")
        if self.max_iterations < 1:
            raise InvalidSolveConfigError(
                f"SolveConfig.max_iterations must be >= 1, got {self.max_iterations}"
            )
        if self.time_limit is not None and not self.time_limit > 0:
            raise InvalidSolveConfigError(
                f"SolveConfig.time_limit must be > 0 or None, got {self.time_limit}"
            )

    @classmethod
    def from_config(cls, section=None, **overrides):
        """
        Build from the iconfig ``SOLVER`` section plus keyword overrides.

        Overrides with value ``None`` are ignored.
        """
        kwargs = {}
        for key, value in (section or {}).items():
            if key in _CONFIG_KEYS:
                kwargs[_CONFIG_KEYS[key]] = value
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        if "max_iterations" in kwargs:
            kwargs["max_iterations"] = int(kwargs["max_iterations"])
        return cls(**kwargs)

    def with_updates(self, **changes):
        return replace(self, **changes)


@dataclass
class Solution:
    """
    Result of a solve.

    ``values`` is indexed by variable index (``values[ref.index]``).
    ``duals`` and ``bound_duals`` follow ``grad f(x) + A.T @ duals +
    bound_duals = 0`` with positive entries at active upper sides and
    negative entries at active lower sides.
    """

    status: SolveStatus
    objective: float = math.nan
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    runtime_ms: float = 0.0
    gap: float | None = None
    iterations: int = 0
    nodes: int = 0
    best_bound: float | None = None
    duals: np.ndarray | None = None
    bound_duals: np.ndarray | None = None
    bound_history: list = field(default_factory=list)
    message: str = ""

    @property
    def is_optimal(self):
        return self.status is SolveStatus.OPTIMAL

    @property
    def has_values(self):
        return self.values is not None and len(self.values) > 0

    def value(self, item):
        """Value of a VarRef or LinearExpr at this solution."""
        if isinstance(item, VarRef):
            return float(self.values[item.index])
        return LinearExpr.of(item).value(self.values)

    def values_of(self, refs):
        return np.array([self.values[r.index] for r in refs], dtype=float)
