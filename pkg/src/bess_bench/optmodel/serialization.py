"""
Text serialization of a Problem.

Fixed line order, one record per line, whitespace separated::

    problem <name> <n_variables> <n_constraints>
    var <index> <name> <lower> <upper> <C|B>
    con <index> <name> <sense> <rhs> <var>:<coef> ...
    objective <constant>
    lin <var>:<coef> ...
    quad <i>,<j>:<coef> ...
    end

Names are written with whitespace replaced by ``_`` and ``-`` for an empty
name. Reals use ``repr`` (shortest round-tripping form), so
``loads(dumps(p))`` reproduces ``p`` exactly.
"""

import re

from .expression import Constraint
from .expression import Integrality
from .expression import LinearExpr
from .expression import Sense
from .expression import Variable
from .problem import Problem

_WS = re.compile(r"\s+")


class SerializationError(ValueError):
    """Text does not follow the problem line format."""


def _name(name):
    return _WS.sub("_", name) if name else "-"


def _unname(token):
    return "" if token == "-" else token


def _real(value):
    return repr(float(value))


def dumps(problem: Problem) -> str:
    """Serialize ``problem`` to the line format."""
    lines = [f"problem {_name(problem.name)} {problem.num_variables} {problem.num_constraints}"]
    for i, v in enumerate(problem.variables):
        kind = "B" if v.integrality is Integrality.BINARY else "C"
        lines.append(f"var {i} {_name(v.name)} {_real(v.lower)} {_real(v.upper)} {kind}")
    for r, con in enumerate(problem.constraints):
        terms = " ".join(f"{i}:{_real(c)}" for i, c in con.expr.items())
        lines.append(f"con {r} {_name(con.name)} {con.sense.value} {_real(con.rhs)} {terms}".rstrip())
    objective = problem.objective
    lines.append(f"objective {_real(objective.constant)}")
    lines.append(("lin " + " ".join(f"{i}:{_real(c)}" for i, c in objective.linear.items())).rstrip())
    lines.append(
        ("quad " + " ".join(f"{i},{j}:{_real(c)}" for i, j, c in objective.quadratic_items())).rstrip()
    )
    lines.append("end")
    return "\n".join(lines) + "\n"


def _pairs(tokens, problem, lineno):
    terms = {}
    for token in tokens:
        try:
            index, coef = token.split(":")
            terms[int(index)] = float(coef)
        except ValueError as e:
            raise SerializationError(f"line {lineno}: bad term {token!r}") from e
        if not 0 <= int(index) < problem.num_variables:
            raise SerializationError(f"line {lineno}: unknown variable {index}")
    return terms


def loads(text: str) -> Problem:
    """Parse the line format back into a new Problem."""
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("problem "):
        raise SerializationError("missing 'problem' header")
    try:
        _, name, n_vars, n_cons = lines[0].split()
        n_vars, n_cons = int(n_vars), int(n_cons)
    except ValueError as e:
        raise SerializationError(f"bad header {lines[0]!r}") from e

    expected = 1 + n_vars + n_cons + 4
    if len(lines) != expected or lines[-1] != "end":
        raise SerializationError(f"expected {expected} lines ending in 'end', got {len(lines)}")

    problem = Problem(_unname(name))
    for lineno, line in enumerate(lines[1 : 1 + n_vars], start=2):
        fields = line.split()
        if len(fields) != 6 or fields[0] != "var":
            raise SerializationError(f"line {lineno}: bad variable record {line!r}")
        integrality = Integrality.BINARY if fields[5] == "B" else Integrality.CONTINUOUS
        problem.add_variable(
            Variable(float(fields[3]), float(fields[4]), integrality, _unname(fields[2]))
        )

    start = 1 + n_vars
    for lineno, line in enumerate(lines[start : start + n_cons], start=start + 1):
        fields = line.split()
        if len(fields) < 5 or fields[0] != "con":
            raise SerializationError(f"line {lineno}: bad constraint record {line!r}")
        terms = _pairs(fields[5:], problem, lineno)
        expr = LinearExpr(terms, 0.0, problem.token if terms else None)
        problem.add_constraint(Constraint(expr, Sense(fields[3]), float(fields[4]), _unname(fields[2])))

    obj_line, lin_line, quad_line = lines[start + n_cons : start + n_cons + 3]
    if not obj_line.startswith("objective ") or not lin_line.startswith("lin"):
        raise SerializationError("bad objective records")
    linear = _pairs(lin_line.split()[1:], problem, start + n_cons + 2)
    problem.add_objective(
        LinearExpr(linear, float(obj_line.split()[1]), problem.token if linear else None)
    )
    if not quad_line.startswith("quad"):
        raise SerializationError("missing 'quad' record")
    for token in quad_line.split()[1:]:
        try:
            pair, coef = token.split(":")
            i, j = (int(k) for k in pair.split(","))
        except ValueError as e:
            raise SerializationError(f"bad quadratic term {token!r}") from e
        if not 0 <= i <= j < problem.num_variables:
            raise SerializationError(f"quadratic term {token!r} needs 0 <= i <= j < {problem.num_variables}")
        problem.objective.quadratic[(i, j)] = float(coef)
    return problem


def dump(problem: Problem, path):
    """Write ``problem`` to ``path``."""
    with open(path, "w") as f:
        f.write(dumps(problem))


def load(path) -> Problem:
    with open(path) as f:
        return loads(f.read())
