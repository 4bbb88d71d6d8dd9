"""
Variables, linear expressions and constraints of the optimization IR.

Expressions are built with ordinary arithmetic on :class:`VarRef` handles::

    e_t = e_prev + eta_c * pc - pd / eta_d
    problem.add_constraint(e_t <= e_max)

Comparisons ``<=`` and ``>=`` return a :class:`Constraint`; equalities are
written with :meth:`LinearExpr.equals` so that ``==`` keeps its usual meaning.
"""

import enum
import math
from dataclasses import dataclass
from numbers import Real


class MalformedVariableError(ValueError):
    """Variable bounds or integrality are inconsistent."""


class ForeignHandleError(ValueError):
    """A VarRef was used with a Problem that did not issue it."""


class MalformedConstraintError(ValueError):
    """Constraint with a non-finite right-hand side or coefficient."""


class Integrality(str, enum.Enum):
    """Domain of a decision variable."""

    CONTINUOUS = "continuous"
    BINARY = "binary"


class Sense(str, enum.Enum):
    """Constraint sense."""

    LE = "<="
    EQ = "="
    GE = ">="


@dataclass(frozen=True)
class VarRef:
    """Handle into the variable table of the Problem identified by ``owner``."""

    index: int
    owner: int

    def to_expr(self):
        return LinearExpr({self.index: 1.0}, 0.0, self.owner)

    def __add__(self, other):
        return self.to_expr() + other

    __radd__ = __add__

    def __sub__(self, other):
        return self.to_expr() - other

    def __rsub__(self, other):
        return other - self.to_expr()

    def __mul__(self, other):
        return self.to_expr() * other

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.to_expr() / other

    def __neg__(self):
        return -self.to_expr()

    def __le__(self, other):
        return self.to_expr() <= other

    def __ge__(self, other):
        return self.to_expr() >= other

    def equals(self, other):
        return self.to_expr().equals(other)


@dataclass(frozen=True)
class Variable:
    """
    Decision variable domain.

    ``upper=None`` means ``+inf`` for continuous variables and ``1`` for
    binaries.
    """

    lower: float = 0.0
    upper: float | None = None
    integrality: Integrality = Integrality.CONTINUOUS
    name: str = ""

    def __post_init__(self):
        integrality = Integrality(self.integrality)
        object.__setattr__(self, "integrality", integrality)
        upper = self.upper
        if upper is None:
            upper = 1.0 if integrality is Integrality.BINARY else math.inf
        lower = float(self.lower)
        upper = float(upper)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

        if math.isnan(lower) or math.isnan(upper):
            raise MalformedVariableError(f"Variable {self.name!r} has NaN bound")
        if lower > upper:
            raise MalformedVariableError(
                f"Variable {self.name!r} has lower bound {lower} > upper bound {upper}"
            )
        if lower == math.inf or upper == -math.inf:
            raise MalformedVariableError(f"Variable {self.name!r} has an empty domain")
        if integrality is Integrality.BINARY and (lower < 0.0 or upper > 1.0):
            raise MalformedVariableError(
                f"Binary variable {self.name!r} bounds [{lower}, {upper}] "
                "are not within [0, 1]"
            )

    @classmethod
    def continuous(cls, lower=0.0, upper=None, name=""):
        return cls(lower, upper, Integrality.CONTINUOUS, name)

    @classmethod
    def binary(cls, name=""):
        return cls(0.0, 1.0, Integrality.BINARY, name)

    @property
    def is_binary(self):
        return self.integrality is Integrality.BINARY


def _merge_owner(a, b):
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise ForeignHandleError(
        f"Cannot combine variables of problem #{a} with variables of problem #{b}"
    )


class LinearExpr:
    """
    Affine expression ``sum(coef * var) + constant``.

    Coefficients are kept per variable index, so duplicate handles are merged
    on construction. :attr:`terms` returns them sorted by index.
    """

    __slots__ = ("_coefs", "constant", "owner")
    __hash__ = None

    def __init__(self, coefs=None, constant=0.0, owner=None):
        self._coefs = dict(coefs or {})
        self.constant = float(constant)
        self.owner = owner

    @classmethod
    def from_terms(cls, terms, constant=0.0):
        """Build from an iterable of ``(VarRef, coefficient)`` pairs."""
        expr = cls(constant=constant)
        for ref, coef in terms:
            expr._add_term(ref, coef)
        return expr

    @classmethod
    def of(cls, value):
        """Coerce a VarRef, a number or an expression to a LinearExpr."""
        if isinstance(value, LinearExpr):
            return value
        if isinstance(value, VarRef):
            return value.to_expr()
        if isinstance(value, Real):
            return cls(constant=float(value))
        raise TypeError(f"Cannot use {type(value).__name__} in a linear expression")

    def _add_term(self, ref, coef):
        coef = float(coef)
        if not math.isfinite(coef):
            raise MalformedConstraintError(f"Non-finite coefficient {coef} for {ref}")
        self.owner = _merge_owner(self.owner, ref.owner)
        self._coefs[ref.index] = self._coefs.get(ref.index, 0.0) + coef

    def copy(self):
        return LinearExpr(self._coefs, self.constant, self.owner)

    @property
    def terms(self):
        """List of ``(VarRef, coefficient)`` sorted by variable index."""
        return [(VarRef(i, self.owner), c) for i, c in sorted(self._coefs.items())]

    def items(self):
        """Sorted ``(index, coefficient)`` pairs with zero coefficients removed."""
        return [(i, c) for i, c in sorted(self._coefs.items()) if c != 0.0]

    def coefficient(self, ref):
        return self._coefs.get(ref.index, 0.0)

    def without_constant(self):
        return LinearExpr(self._coefs, 0.0, self.owner)

    def value(self, x):
        """Evaluate at the point ``x`` (indexable by variable index)."""
        return self.constant + sum(c * float(x[i]) for i, c in self._coefs.items())

    # arithmetic

    def __add__(self, other):
        if isinstance(other, Real):
            return LinearExpr(self._coefs, self.constant + float(other), self.owner)
        other = LinearExpr.of(other)
        result = self.copy()
        result.owner = _merge_owner(self.owner, other.owner)
        for i, c in other._coefs.items():
            result._coefs[i] = result._coefs.get(i, 0.0) + c
        result.constant += other.constant
        return result

    __radd__ = __add__

    def __neg__(self):
        return LinearExpr({i: -c for i, c in self._coefs.items()}, -self.constant, self.owner)

    def __sub__(self, other):
        return self + (-LinearExpr.of(other))

    def __rsub__(self, other):
        return LinearExpr.of(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Real):
            raise TypeError("Linear expressions can only be scaled by numbers")
        k = float(other)
        return LinearExpr({i: k * c for i, c in self._coefs.items()}, k * self.constant, self.owner)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Real):
            raise TypeError("Linear expressions can only be divided by numbers")
        return self * (1.0 / float(other))

    # constraints

    def __le__(self, other):
        return Constraint.compare(self, other, Sense.LE)

    def __ge__(self, other):
        return Constraint.compare(self, other, Sense.GE)

    def equals(self, other):
        return Constraint.compare(self, other, Sense.EQ)

    def __repr__(self):
        body = " + ".join(f"{c:g}*x{i}" for i, c in self.items()) or "0"
        return f"LinearExpr({body} + {self.constant:g})"


def lin_sum(items):
    """Sum VarRefs, numbers and expressions into one LinearExpr."""
    total = LinearExpr()
    for item in items:
        item = LinearExpr.of(item)
        total.owner = _merge_owner(total.owner, item.owner)
        for i, c in item._coefs.items():
            total._coefs[i] = total._coefs.get(i, 0.0) + c
        total.constant += item.constant
    return total


@dataclass(frozen=True)
class Constraint:
    """Linear constraint ``expr sense rhs`` with the expression constant folded into rhs."""

    expr: LinearExpr
    sense: Sense
    rhs: float
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "sense", Sense(self.sense))
        expr = LinearExpr.of(self.expr)
        rhs = float(self.rhs) - expr.constant
        if not math.isfinite(rhs):
            raise MalformedConstraintError(f"Constraint {self.name!r} has non-finite rhs {rhs}")
        object.__setattr__(self, "expr", expr.without_constant())
        object.__setattr__(self, "rhs", rhs)

    @classmethod
    def compare(cls, lhs, rhs, sense):
        diff = LinearExpr.of(lhs) - LinearExpr.of(rhs)
        return cls(diff.without_constant(), sense, -diff.constant)

    def named(self, name):
        return Constraint(self.expr, self.sense, self.rhs, name)

    def activity(self, x):
        return self.expr.value(x)

    def violation(self, x):
        """Amount by which the point ``x`` violates the constraint (0 if satisfied)."""
        lhs = self.activity(x)
        if self.sense is Sense.LE:
            return max(0.0, lhs - self.rhs)
        if self.sense is Sense.GE:
            return max(0.0, self.rhs - lhs)
        return abs(lhs - self.rhs)
