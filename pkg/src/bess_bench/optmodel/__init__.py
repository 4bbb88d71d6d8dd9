"""
Optimization-problem intermediate representation.

Shared by the BESS formulations and the reference solvers.
"""

from .expression import Constraint
from .expression import ForeignHandleError
from .expression import Integrality
from .expression import LinearExpr
from .expression import MalformedConstraintError
from .expression import MalformedVariableError
from .expression import Sense
from .expression import Variable
from .expression import VarRef
from .expression import lin_sum
from .problem import FrozenProblemError
from .problem import Objective
from .problem import Problem
from .problem import ProblemArrays
from .serialization import SerializationError
from .serialization import dump
from .serialization import dumps
from .serialization import load
from .serialization import loads


def add_variable(p: Problem, v: Variable) -> VarRef:
    """Add ``v`` to ``p`` and return its handle."""
    return p.add_variable(v)


def add_constraint(p: Problem, c: Constraint) -> None:
    """Add ``c`` to ``p``."""
    p.add_constraint(c)


def add_sum_of_squares(p: Problem, exprs) -> None:
    """Add the sum of squares of ``exprs`` to the objective of ``p``."""
    p.add_sum_of_squares(exprs)


__all__ = [
    "Constraint",
    "ForeignHandleError",
    "FrozenProblemError",
    "Integrality",
    "LinearExpr",
    "MalformedConstraintError",
    "MalformedVariableError",
    "Objective",
    "Problem",
    "ProblemArrays",
    "SerializationError",
    "Sense",
    "VarRef",
    "Variable",
    "add_constraint",
    "add_sum_of_squares",
    "add_variable",
    "dump",
    "dumps",
    "lin_sum",
    "load",
    "loads",
]
