"""Tests for the BESS parameter records and formulation builders."""

import numpy as np
import pytest

from bess_bench.bess_models import ALL_KINDS
from bess_bench.bess_models import EXAMPLE_INITIAL
from bess_bench.bess_models import EXAMPLE_PARAMS
from bess_bench.bess_models import BessInitial
from bess_bench.bess_models import BessParams
from bess_bench.bess_models import DivisionGuardError
from bess_bench.bess_models import EmptyHorizonError
from bess_bench.bess_models import InvalidParametersError
from bess_bench.bess_models import ModelKind
from bess_bench.bess_models import build
from bess_bench.bess_models import na_derived
from bess_bench.bess_models import soe_telescoping_residual
from bess_bench.optmodel import Problem
from bess_bench.optmodel import Sense
from bess_bench.solver import SolveStatus
from bess_bench.solver import solve


def test_model_kind_parse():
    assert ModelKind.parse("extlp") is ModelKind.EXT_LP
    assert ModelKind.parse(" RelYZ ") is ModelKind.REL_YZ
    assert ModelKind.parse(ModelKind.NA) is ModelKind.NA
    with pytest.raises(InvalidParametersError):
        ModelKind.parse("milp")
    assert [k.value for k in ALL_KINDS] == ["Exc", "LP", "NA", "RelYZ", "ExtLP"]


@pytest.mark.parametrize(
    "changes",
    [
        {"e_min": 2.5},
        {"e_min": -0.1},
        {"eta_c": 0.0},
        {"eta_d": 1.2},
        {"p_c_max": -1.0},
        {"e_max": float("inf")},
    ],
)
def test_invalid_params(changes):
    values = EXAMPLE_PARAMS.as_dict() | changes
    with pytest.raises(InvalidParametersError):
        BessParams(**values)


def test_zero_rating_is_a_division_guard_error():
    with pytest.raises(DivisionGuardError):
        BessParams(**(EXAMPLE_PARAMS.as_dict() | {"p_c_max": 0.0}))


def test_initial_energy_outside_window():
    with pytest.raises(InvalidParametersError):
        BessInitial(2.5).check(EXAMPLE_PARAMS)
    assert BessInitial.midpoint(EXAMPLE_PARAMS).e0 == pytest.approx(1.35)


def test_na_derived_values():
    derived = na_derived(EXAMPLE_PARAMS)
    assert derived.eta_single == pytest.approx(0.9806, abs=1e-4)
    assert derived.p_max_single == 1.0
    assert na_derived(EXAMPLE_PARAMS, 0.5).p_max_single == 0.5
    with pytest.raises(InvalidParametersError):
        na_derived(EXAMPLE_PARAMS, 0.0)


def row_names(p):
    return [c.name.split(".", 1)[1] for c in p.constraints]


def test_exclusive_block_layout():
    p = Problem()
    bv = build("Exc", EXAMPLE_PARAMS, EXAMPLE_INITIAL, 1, p)
    continuous = [v for v in p.variables if not v.is_binary]
    binaries = [v for v in p.variables if v.is_binary]
    assert len(continuous) == 3 and len(binaries) == 2
    # SoE window carried as bounds on e
    assert row_names(p) == ["balance[0]", "charge_on[0]", "discharge_on[0]", "exclusive[0]"]
    e = p.variable(bv.e[0])
    assert (e.lower, e.upper) == (0.7, 2.0)
    assert p.variable(bv.p_c[0]).upper == 0.8
    assert p.variable(bv.p_d[0]).upper == 1.0


def test_lp_block_with_unit_efficiency():
    params = BessParams(0.7, 2.0, 0.8, 1.0, 1.0, 1.0)
    p = Problem()
    bv = build("LP", params, EXAMPLE_INITIAL, 1, p)
    assert not p.is_mip
    assert p.num_variables == 3
    balance = p.constraints[0]
    assert balance.sense is Sense.EQ
    assert balance.rhs == pytest.approx(1.5)
    assert balance.expr.coefficient(bv.p_c[0]) == pytest.approx(-1.0)
    assert balance.expr.coefficient(bv.p_d[0]) == pytest.approx(1.0)


def test_na_block_rows():
    p = Problem()
    bv = build("NA", EXAMPLE_PARAMS, EXAMPLE_INITIAL, 2, p)
    assert bv.e is None and bv.z is None
    assert p.num_variables == 4
    assert row_names(p) == [
        "na_upper[0]", "na_lower[0]", "na_power[0]",
        "na_upper[1]", "na_lower[1]", "na_power[1]",
    ]  # fmt: skip
    power = p.constraints[2]
    assert power.rhs == 1.0
    upper = p.constraints[3]
    eta = na_derived(EXAMPLE_PARAMS).eta_single
    assert upper.expr.coefficient(bv.p_c[0]) == pytest.approx(eta)
    assert upper.expr.coefficient(bv.p_d[1]) == pytest.approx(-eta)
    assert upper.rhs == pytest.approx(0.5)


def test_na_without_power_cut():
    p = Problem()
    build("NA", EXAMPLE_PARAMS, EXAMPLE_INITIAL, 3, p, na_power_cut=False)
    assert p.num_constraints == 6


def test_ext_lp_cut_rows():
    p = Problem()
    bv = build("ExtLP", EXAMPLE_PARAMS, EXAMPLE_INITIAL, 2, p)
    names = row_names(p)
    assert names[:4] == ["balance[0]", "charge_room[0]", "discharge_room[0]", "power_facet[0]"]
    facet = p.constraints[3]
    assert facet.expr.coefficient(bv.p_c[0]) == pytest.approx(1.0 / 0.8)
    assert facet.rhs == pytest.approx(1.0)
    # second period cuts use the previous SoE variable
    room = p.constraints[5]
    assert room.expr.coefficient(bv.e[0]) == pytest.approx(1.0)


def test_relyz_switches_are_continuous():
    p = Problem()
    bv = build("RelYZ", EXAMPLE_PARAMS, EXAMPLE_INITIAL, 4, p)
    assert not p.is_mip
    assert len(bv.z) == len(bv.y) == 4


def test_empty_horizon():
    with pytest.raises(EmptyHorizonError):
        build("LP", EXAMPLE_PARAMS, EXAMPLE_INITIAL, 0, Problem())


def test_terminal_soe_row():
    p = Problem()
    bv = build("LP", EXAMPLE_PARAMS, EXAMPLE_INITIAL, 3, p, terminal_soe=True)
    last = p.constraints[-1]
    assert last.name == "bess.terminal"
    assert last.sense is Sense.GE
    assert last.expr.coefficient(bv.e[2]) == 1.0


def test_prefix_names_variables_and_rows():
    p = Problem()
    build("Exc", EXAMPLE_PARAMS, EXAMPLE_INITIAL, 1, p, prefix="unit3.d0")
    assert p.variables[0].name == "unit3.d0.pc[0]"
    assert p.constraints[0].name == "unit3.d0.balance[0]"


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_soe_telescopes_at_optimum(kind):
    rng = np.random.default_rng(11)
    p = Problem()
    bv = build(kind, EXAMPLE_PARAMS, EXAMPLE_INITIAL, 6, p)
    target = rng.uniform(-0.8, 0.8, 6)
    p.add_sum_of_squares([bv.net_injection(t) - float(target[t]) for t in range(6)])
    p.freeze()
    sol = solve(p)
    assert sol.status is SolveStatus.OPTIMAL
    assert soe_telescoping_residual(bv, sol.values) <= 1e-6
    assert p.max_violation(sol.values) <= 1e-5
