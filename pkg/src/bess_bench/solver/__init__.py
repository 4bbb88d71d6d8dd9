"""
Reference solvers: bounded simplex (LP), ADMM (convex QP) and
branch-and-bound (mixed-binary LP/QP).
"""

from .admm import AdmmQpSolver
from .admm import solve_qp
from .base import InvalidSolveConfigError
from .base import Solution
from .base import SolveConfig
from .base import SolverInputError
from .base import SolveStatus
from .branch_bound import relative_gap
from .branch_bound import solve_milp
from .simplex import solve_lp


def solve(p, cfg: SolveConfig | None = None) -> Solution:
    """
    Pick the solver matching the problem class.

    Binaries go to :func:`solve_milp`, quadratic objectives to
    :func:`solve_qp`, everything else to :func:`solve_lp`.
    """
    if p.is_mip:
        return solve_milp(p, cfg)
    if p.is_quadratic:
        return solve_qp(p, cfg)
    return solve_lp(p, cfg)


__all__ = [
    "AdmmQpSolver",
    "InvalidSolveConfigError",
    "Solution",
    "SolveConfig",
    "SolveStatus",
    "SolverInputError",
    "relative_gap",
    "solve",
    "solve_lp",
    "solve_milp",
    "solve_qp",
]
