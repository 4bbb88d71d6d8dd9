"""Tests for the problem text format."""

import numpy as np
import pytest

from bess_bench.bess_models import EXAMPLE_INITIAL
from bess_bench.bess_models import EXAMPLE_PARAMS
from bess_bench.bess_models import build
from bess_bench.optmodel import Problem
from bess_bench.optmodel import SerializationError
from bess_bench.optmodel import dump
from bess_bench.optmodel import dumps
from bess_bench.optmodel import load
from bess_bench.optmodel import loads


def small_problem():
    p = Problem("small qp")
    x = p.add_var(-1.5, 2.0, name="x")
    z = p.add_var(binary=True, name="z")
    p.add_constraint(x - 0.1 * z <= 1.0 / 3.0, "cap")
    p.add_constraint((x + z).equals(1), "")
    p.add_sum_of_squares([x + z - 0.25])
    p.add_objective(4 * z)
    return p


def test_text_layout():
    text = dumps(small_problem())
    lines = text.splitlines()
    assert lines[0] == "problem small_qp 2 2"
    assert lines[1] == "var 0 x -1.5 2.0 C"
    assert lines[2] == "var 1 z 0.0 1.0 B"
    assert lines[3].startswith("con 0 cap <= 0.3333333333333333 0:1.0 1:-0.1")
    assert lines[4].startswith("con 1 - = 1.0")
    assert lines[-1] == "end"


def test_reload_reproduces_text_exactly():
    text = dumps(small_problem())
    assert dumps(loads(text)) == text


def test_bess_block_survives_file_round_trip(tmp_path):
    p = Problem("bess")
    build("Exc", EXAMPLE_PARAMS, EXAMPLE_INITIAL, 3, p)
    p.freeze()
    path = tmp_path / "bess.txt"
    dump(p, path)
    q = load(path)
    assert q.num_variables == p.num_variables
    assert q.num_constraints == p.num_constraints
    np.testing.assert_array_equal(q.arrays().a, p.arrays().a)
    np.testing.assert_array_equal(q.arrays().binaries, p.arrays().binaries)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "var 0 x 0.0 1.0 C\nend\n",
        "problem p 1 0\nvar 0 x 0.0 1.0 C\nobjective 0.0\nlin\nquad\n",
        "problem p 1 1\nvar 0 x 0.0 1.0 C\ncon 0 c <= 1.0 3:1.0\nobjective 0.0\nlin\nquad\nend\n",
        "problem p 1 0\nvar 0 x 0.0 1.0 C\nobjective 0.0\nlin 0-1.0\nquad\nend\n",
    ],
)
def test_malformed_text(text):
    with pytest.raises(SerializationError):
        loads(text)


@pytest.mark.parametrize("term", ["0,2:1.0", "2,0:1.0", "1,0:1.0", "-1,0:1.0"])
def test_quadratic_index_out_of_range_or_unordered(term):
    text = f"problem p 2 0\nvar 0 x 0.0 1.0 C\nvar 1 y 0.0 1.0 C\nobjective 0.0\nlin\nquad {term}\nend\n"
    with pytest.raises(SerializationError):
        loads(text)


def test_quadratic_diagonal_and_upper_terms_load():
    text = "problem p 2 0\nvar 0 x 0.0 1.0 C\nvar 1 y 0.0 1.0 C\nobjective 0.0\nlin\nquad 0,0:1.0 0,1:0.5\nend\n"
    assert dumps(loads(text)) == text
