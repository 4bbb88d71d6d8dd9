"""
Optimization problem container.

A :class:`Problem` owns a variable table, a list of linear constraints and a
minimization objective whose quadratic part only grows through sums of
squares, which keeps it positive semidefinite by construction.
"""

import itertools
import logging
from dataclasses import dataclass
from dataclasses import field
from functools import cached_property

import numpy as np
import scipy.sparse

from .expression import Constraint
from .expression import ForeignHandleError
from .expression import Integrality
from .expression import LinearExpr
from .expression import Sense
from .expression import Variable
from .expression import VarRef

logger = logging.getLogger(__name__)

_TOKENS = itertools.count(1)


class FrozenProblemError(ValueError):
    """Attempt to modify a finalized Problem."""


@dataclass
class Objective:
    """
    Minimization objective ``linear(x) + sum(c_ij * x_i * x_j)``.

    The quadratic part is stored as upper-triangular triples ``(i, j, c)``
    with ``i <= j``; an off-diagonal triple carries the full cross-term
    coefficient, so ``(x + y)**2`` is ``(x,x,1), (y,y,1), (x,y,2)``.
    """

    linear: LinearExpr = field(default_factory=LinearExpr)
    quadratic: dict = field(default_factory=dict)
    sense: str = "minimize"

    @property
    def constant(self):
        return self.linear.constant

    @property
    def has_quadratic(self):
        return any(c != 0.0 for c in self.quadratic.values())

    def quadratic_items(self):
        """Sorted ``(i, j, coefficient)`` triples with ``i <= j``."""
        return [(i, j, c) for (i, j), c in sorted(self.quadratic.items()) if c != 0.0]

    def quadratic_matrix(self, n):
        """Symmetric sparse ``Q`` (n x n) with ``x @ Q @ x`` equal to the quadratic part."""
        rows, cols, vals = [], [], []
        for (i, j), c in self.quadratic.items():
            if i == j:
                rows.append(i)
                cols.append(i)
                vals.append(c)
            else:
                rows.extend([i, j])
                cols.extend([j, i])
                vals.extend([0.5 * c, 0.5 * c])
        return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))

    def linear_vector(self, n):
        c = np.zeros(n)
        for i, coef in self.linear.items():
            c[i] = coef
        return c

    def value(self, x):
        total = self.linear.value(x)
        for (i, j), c in self.quadratic.items():
            total += c * float(x[i]) * float(x[j])
        return total


class Problem:
    """
    Variables with bounds and integrality, linear constraints and an objective.

    Construction is single-writer. After :meth:`freeze` the problem rejects
    modification and caches its array form for repeated solves.
    """

    def __init__(self, name="problem"):
        self.name = name
        self.token = next(_TOKENS)
        self._variables = []
        self._constraints = []
        self._cuts = []
        self._objective = Objective()
        self._frozen = False
        self._arrays = {}

    def __repr__(self):
        return (
            f"Problem({self.name!r}, variables={self.num_variables}, "
            f"constraints={self.num_constraints}, binaries={len(self.binary_indices)})"
        )

    # construction

    def _require_mutable(self):
        if self._frozen:
            raise FrozenProblemError(f"Problem {self.name!r} is frozen")

    def _check_ref(self, ref):
        if ref.owner != self.token or not 0 <= ref.index < len(self._variables):
            raise ForeignHandleError(
                f"{ref} was not issued by problem {self.name!r} (#{self.token})"
            )

    def _check_expr(self, expr):
        if expr.owner is not None and expr.owner != self.token:
            raise ForeignHandleError(
                f"Expression uses variables of problem #{expr.owner}, "
                f"not of {self.name!r} (#{self.token})"
            )
        for i, _ in expr.items():
            if i >= len(self._variables):
                raise ForeignHandleError(f"Variable index {i} not in problem {self.name!r}")

    def add_variable(self, variable: Variable) -> VarRef:
        """Append ``variable`` to the table and return its handle."""
        self._require_mutable()
        if not isinstance(variable, Variable):
            raise TypeError("add_variable expects a Variable")
        self._variables.append(variable)
        return VarRef(len(self._variables) - 1, self.token)

    def add_var(self, lower=0.0, upper=None, binary=False, name="") -> VarRef:
        """Shorthand for :meth:`add_variable`."""
        integrality = Integrality.BINARY if binary else Integrality.CONTINUOUS
        return self.add_variable(Variable(lower, upper, integrality, name))

    def add_constraint(self, constraint: Constraint, name=None) -> int:
        """Append ``constraint`` and return its row index."""
        self._require_mutable()
        if not isinstance(constraint, Constraint):
            raise TypeError("add_constraint expects a Constraint, e.g. `expr <= rhs`")
        self._check_expr(constraint.expr)
        if name is not None:
            constraint = constraint.named(name)
        self._constraints.append(constraint)
        return len(self._constraints) - 1

    def add_user_cut(self, constraint: Constraint, name=None) -> int:
        """
        Register a valid inequality for the branch-and-bound relaxations.

        A user cut must hold at every feasible point with integral binaries.
        It is not one of :attr:`constraints` and is not serialized.
        """
        self._require_mutable()
        if not isinstance(constraint, Constraint):
            raise TypeError("add_user_cut expects a Constraint, e.g. `expr <= rhs`")
        self._check_expr(constraint.expr)
        if name is not None:
            constraint = constraint.named(name)
        self._cuts.append(constraint)
        return len(self._cuts) - 1

    def add_objective(self, expr):
        """Add a linear (affine) term to the objective."""
        self._require_mutable()
        expr = LinearExpr.of(expr)
        self._check_expr(expr)
        self._objective.linear = self._objective.linear + expr

    def add_sum_of_squares(self, exprs):
        """
        Add ``sum(expr_i ** 2)`` to the objective.

        Each square is expanded into diagonal and cross-term triples, a linear
        part ``2 * c * a_i`` and a constant ``c ** 2``.
        """
        self._require_mutable()
        exprs = [LinearExpr.of(e) for e in exprs]
        for expr in exprs:
            self._check_expr(expr)

        quadratic = self._objective.quadratic
        linear = {}
        constant = 0.0
        for expr in exprs:
            items = expr.items()
            c = expr.constant
            for p, (i, ai) in enumerate(items):
                quadratic[(i, i)] = quadratic.get((i, i), 0.0) + ai * ai
                for j, aj in items[p + 1 :]:
                    quadratic[(i, j)] = quadratic.get((i, j), 0.0) + 2.0 * ai * aj
                linear[i] = linear.get(i, 0.0) + 2.0 * c * ai
            constant += c * c
        self._objective.linear = self._objective.linear + LinearExpr(
            linear, constant, self.token if linear else None
        )

    def freeze(self):
        """Finalize the problem; later modification raises FrozenProblemError."""
        self._frozen = True
        return self

    @property
    def is_frozen(self):
        return self._frozen

    # inspection

    @property
    def variables(self):
        return tuple(self._variables)

    @property
    def constraints(self):
        return tuple(self._constraints)

    @property
    def user_cuts(self):
        return tuple(self._cuts)

    @property
    def objective(self):
        return self._objective

    def variable(self, ref):
        self._check_ref(ref)
        return self._variables[ref.index]

    def ref(self, index):
        if not 0 <= index < len(self._variables):
            raise ForeignHandleError(f"Variable index {index} not in problem {self.name!r}")
        return VarRef(index, self.token)

    @property
    def num_variables(self):
        return len(self._variables)

    @property
    def num_constraints(self):
        return len(self._constraints)

    @property
    def binary_indices(self):
        return np.array([i for i, v in enumerate(self._variables) if v.is_binary], dtype=int)

    @property
    def is_mip(self):
        return any(v.is_binary for v in self._variables)

    @property
    def is_quadratic(self):
        return self._objective.has_quadratic

    def lower_bounds(self):
        return np.array([v.lower for v in self._variables], dtype=float)

    def upper_bounds(self):
        return np.array([v.upper for v in self._variables], dtype=float)

    def arrays(self, user_cuts=False):
        """
        Sparse array form used by the solvers.

        Parameters:
        -----------
        user_cuts : bool
            Append the rows registered with :meth:`add_user_cut` after the
            model constraints

        Returns:
        --------
        ProblemArrays
            Constraint matrix, senses, rhs, bounds and objective data
        """
        if user_cuts in self._arrays:
            return self._arrays[user_cuts]
        rows = list(self._constraints)
        if user_cuts:
            rows.extend(self._cuts)
        n = self.num_variables
        row_index, col_index, values = [], [], []
        for r, con in enumerate(rows):
            for i, coef in con.expr.items():
                row_index.append(r)
                col_index.append(i)
                values.append(coef)
        matrix = scipy.sparse.csr_matrix((values, (row_index, col_index)), shape=(len(rows), n))
        arrays = ProblemArrays(
            matrix=matrix,
            senses=tuple(con.sense for con in rows),
            rhs=np.array([con.rhs for con in rows], dtype=float),
            lower=self.lower_bounds(),
            upper=self.upper_bounds(),
            c=self._objective.linear_vector(n),
            c0=self._objective.constant,
            q_matrix=self._objective.quadratic_matrix(n),
            binaries=self.binary_indices,
        )
        if self._frozen:
            self._arrays[user_cuts] = arrays
        return arrays

    def evaluate_objective(self, x):
        return self._objective.value(x)

    def max_violation(self, x):
        """Largest constraint or bound violation at the point ``x``."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self._variables:
            worst = max(
                float(np.max(self.lower_bounds() - x, initial=0.0)),
                float(np.max(x - self.upper_bounds(), initial=0.0)),
            )
        for con in self._constraints:
            worst = max(worst, con.violation(x))
        return worst

    def relax(self):
        """Copy of this problem with every binary relaxed to a continuous [0, 1] variable."""
        relaxed = self.copy(name=f"{self.name}.relaxed")
        relaxed._variables = [
            Variable(v.lower, v.upper, Integrality.CONTINUOUS, v.name) if v.is_binary else v
            for v in relaxed._variables
        ]
        relaxed._cuts = []
        return relaxed

    def copy(self, name=None):
        """Unfrozen copy sharing no mutable state; handles stay valid for the copy."""
        other = Problem(name or self.name)
        other.token = self.token
        other._variables = list(self._variables)
        other._constraints = list(self._constraints)
        other._cuts = list(self._cuts)
        other._objective = Objective(
            self._objective.linear.copy(), dict(self._objective.quadratic), self._objective.sense
        )
        return other


@dataclass(frozen=True)
class ProblemArrays:
    """
    Numerical view of a Problem.

    ``matrix`` and ``q_matrix`` are CSR; ``a`` and ``q`` give dense copies
    for small problems.
    """

    matrix: scipy.sparse.csr_matrix
    senses: tuple
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    c: np.ndarray
    c0: float
    q_matrix: scipy.sparse.csr_matrix
    binaries: np.ndarray

    @property
    def shape(self):
        return self.matrix.shape

    @cached_property
    def a(self):
        return self.matrix.toarray()

    @cached_property
    def q(self):
        return self.q_matrix.toarray()

    @property
    def has_quadratic(self):
        return self.q_matrix.count_nonzero() > 0

    @property
    def row_lower(self):
        """Lower activity limit per row (``-inf`` for <= rows)."""
        return np.array([r if s is not Sense.LE else -np.inf for s, r in zip(self.senses, self.rhs)])

    @property
    def row_upper(self):
        """Upper activity limit per row (``+inf`` for >= rows)."""
        return np.array([r if s is not Sense.GE else np.inf for s, r in zip(self.senses, self.rhs)])
