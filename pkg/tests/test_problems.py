"""Tests for SPT and TEP assembly."""

import itertools
import math

import numpy as np
import pytest

from bess_bench.bess_models import ALL_KINDS
from bess_bench.bess_models import EXAMPLE_INITIAL
from bess_bench.bess_models import EXAMPLE_PARAMS
from bess_bench.instances import Corridor
from bess_bench.instances import Generator
from bess_bench.instances import SptInstance
from bess_bench.instances import TepDataset
from bess_bench.instances import TepInstance
from bess_bench.instances import load_tep_dataset
from bess_bench.instances import spt_instance_for
from bess_bench.instances import tep_instance_for
from bess_bench.metrics import simultaneity_rate
from bess_bench.metrics import spt_metrics
from bess_bench.metrics import tep_metrics
from bess_bench.problems import assemble_spt
from bess_bench.problems import assemble_tep
from bess_bench.solver import SolveConfig
from bess_bench.solver import SolveStatus
from bess_bench.solver import solve
from bess_bench.solver.simplex import solve_lp_arrays

EXAMPLE_FLEET = ((EXAMPLE_PARAMS, EXAMPLE_INITIAL),)


def test_lp_variable_count(small_pool):
    asm = assemble_spt(spt_instance_for(1, 1, 0, small_pool), "LP")
    assert asm.problem.num_variables == 72
    assert len(asm.problem.binary_indices) == 0
    assert asm.problem.is_frozen
    assert asm.problem.name == "spt.LP.n1"


def test_exclusive_binary_count(small_pool):
    asm = assemble_spt(spt_instance_for(1, 2, 0, small_pool), "Exc")
    assert len(asm.problem.binary_indices) == 96


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_zero_signal_is_tracked_by_idling(kind):
    inst = SptInstance((0.0,) * 24, EXAMPLE_FLEET)
    asm = assemble_spt(inst, kind)
    sol = solve(asm.problem)
    assert sol.status is SolveStatus.OPTIMAL
    assert sol.objective == pytest.approx(0.0, abs=1e-6)


def test_tracking_objective_matches_problem(small_pool):
    asm = assemble_spt(spt_instance_for(3, 1, 0, small_pool), "LP")
    sol = solve(asm.problem)
    assert asm.tracking_objective(sol.values) == pytest.approx(sol.objective, rel=1e-8, abs=1e-8)


def objectives(inst):
    return {kind.value: solve(assemble_spt(inst, kind).problem).objective for kind in ALL_KINDS}


def assert_dominance(obj):
    chain = [obj["LP"], obj["RelYZ"], obj["ExtLP"], obj["Exc"]]
    for inner, outer in zip(chain, chain[1:]):
        assert inner <= outer + 1e-6 * max(1.0, abs(outer)), obj


@pytest.mark.parametrize("index", range(3))
def test_relaxations_bound_the_exclusive_model(small_pool, index):
    assert_dominance(objectives(spt_instance_for(17, 1, index, small_pool)))


@pytest.mark.slow
@pytest.mark.parametrize("n_bess", [1, 2])
def test_relaxation_dominance_acceptance(small_pool, n_bess):
    for index in range(50):
        assert_dominance(objectives(spt_instance_for(17, n_bess, index, small_pool)))


def tiny_dataset(demand=40.0, candidates=3, capex=10.0):
    return TepDataset(
        nodes=3,
        corridors=(Corridor(1, 3, 5.0, 30.0, candidates, capex),),
        generators=(Generator(1, 100.0, 0.0),),
        demand_peak={1: 0.0, 2: 0.0, 3: demand},
        res_capacity={1: 0.0, 2: 0.0, 3: 0.0},
        bess_node=3,
        shed_penalty=1000.0,
    )


def tiny_instance(dataset, small_pool):
    wind = [p for p in small_pool if p.kind == "wind"]
    return TepInstance(dataset, EXAMPLE_FLEET, 1, {node: (wind[0],) for node in dataset.node_ids})


def test_zero_demand_builds_nothing(small_pool):
    asm = assemble_tep(tiny_instance(tiny_dataset(demand=0.0), small_pool), "Exc")
    sol = solve(asm.problem)
    assert sol.status is SolveStatus.OPTIMAL
    assert asm.built_lines(sol.values) == [0]
    assert asm.opex(sol.values) == pytest.approx(0.0, abs=1e-7)
    assert sol.objective == pytest.approx(0.0, abs=1e-7)


def fixed_build_oracle(asm):
    arrays = asm.problem.arrays()
    build_index = [b.index for lines in asm.build_vars for b in lines]
    best = math.inf
    for combo in itertools.product((0.0, 1.0), repeat=len(build_index)):
        lower = arrays.lower.copy()
        upper = arrays.upper.copy()
        lower[build_index] = combo
        upper[build_index] = combo
        result = solve_lp_arrays(arrays, lower, upper)
        if result.status is SolveStatus.OPTIMAL:
            best = min(best, result.objective + arrays.c0)
    return best


def test_congested_node_gets_a_line(small_pool):
    asm = assemble_tep(tiny_instance(tiny_dataset(), small_pool), "LP")
    sol = solve(asm.problem, SolveConfig(mip_rel_gap=1e-7))
    assert sol.status is SolveStatus.OPTIMAL
    assert sum(asm.built_lines(sol.values)) >= 1
    assert sol.objective == pytest.approx(fixed_build_oracle(asm), rel=1e-6)
    assert asm.capex(sol.values) == pytest.approx(10.0 * sum(asm.built_lines(sol.values)))
    assert np.max(asm.balance_residuals(sol.values)) <= 1e-6


def test_symmetry_cuts_keep_the_optimum(small_pool):
    inst = tiny_instance(tiny_dataset(), small_pool)
    plain = assemble_tep(inst, "LP")
    cut = assemble_tep(inst, "LP", symmetry_cuts=True)
    assert cut.problem.num_constraints == plain.problem.num_constraints + 2
    cfg = SolveConfig(mip_rel_gap=1e-7)
    assert solve(cut.problem, cfg).objective == pytest.approx(solve(plain.problem, cfg).objective, rel=1e-6)


def test_exclusive_binary_count_for_fifty_days(small_pool):
    inst = tep_instance_for(1, 3, 0, 50, small_pool)
    asm = assemble_tep(inst, "Exc")
    line_binaries = sum(c.candidate_count for c in load_tep_dataset().corridors)
    assert len(asm.problem.binary_indices) == 7200 + line_binaries
    assert len(asm.all_bess_vars()) == 150


def test_bess_injection_enters_the_storage_node_balance(small_pool):
    inst = tiny_instance(tiny_dataset(), small_pool)
    asm = assemble_tep(inst, "LP")
    row = asm.problem.constraints[asm.balance_rows[2]]
    assert row.name == "balance3.d0.h0"
    bv = asm.bess_vars[0][0]
    assert row.expr.coefficient(bv.p_d[0]) == 1.0
    assert row.expr.coefficient(bv.p_c[0]) == -1.0


@pytest.mark.parametrize("n_bess", [1, 2])
def test_tracking_objective_is_convex(small_pool, n_bess):
    arrays = assemble_spt(spt_instance_for(21, n_bess, 0, small_pool), "Exc").problem.arrays()
    q = arrays.q
    rng = np.random.default_rng(n_bess)
    samples = rng.normal(size=(1000, q.shape[0]))
    assert np.all(np.einsum("ij,jk,ik->i", samples, q, samples) >= -1e-9)


@pytest.mark.parametrize("index", range(2))
def test_exclusive_solutions_never_overlap(small_pool, index):
    asm = assemble_spt(spt_instance_for(31, 1, index, small_pool), "Exc")
    sol = solve(asm.problem)
    assert sol.status is SolveStatus.OPTIMAL
    assert simultaneity_rate(sol, asm.bess_vars) == 0.0


@pytest.mark.slow
def test_exclusive_solutions_never_overlap_acceptance(small_pool):
    for n_bess in (1, 2):
        for index in range(25):
            asm = assemble_spt(spt_instance_for(31, n_bess, index, small_pool), "Exc")
            sol = solve(asm.problem)
            assert sol.has_values, (n_bess, index)
            assert simultaneity_rate(sol, asm.bess_vars) == 0.0, (n_bess, index)


@pytest.mark.slow
def test_lp_model_is_over_optimistic(small_pool):
    ratios = []
    for index in range(20):
        inst = spt_instance_for(41, 1, index, small_pool)
        exc = assemble_spt(inst, "Exc")
        exc_rmse = spt_metrics(solve(exc.problem), exc).rmse
        lp = assemble_spt(inst, "LP")
        ratios.append(spt_metrics(solve(lp.problem), lp, exc_rmse).rmse_rel)
    ratios = [r for r in ratios if not math.isnan(r)]
    assert all(r <= 1.0 + 1e-6 for r in ratios)
    assert np.mean(ratios) < 1.0


def tep_objectives(inst, kinds=("Exc", "RelYZ", "LP")):
    cfg = SolveConfig(mip_rel_gap=1e-7)
    return {kind: solve(assemble_tep(inst, kind).problem, cfg).objective for kind in kinds}


def test_tep_relaxations_cost_no_more_than_exclusive(small_pool):
    obj = tep_objectives(tiny_instance(tiny_dataset(), small_pool))
    assert obj["LP"] <= obj["RelYZ"] + 1e-6 * abs(obj["RelYZ"])
    assert obj["RelYZ"] <= obj["Exc"] + 1e-6 * abs(obj["Exc"])


@pytest.mark.slow
@pytest.mark.parametrize("index", range(3))
def test_tep_cost_ratios_on_default_dataset(small_pool, index):
    obj = tep_objectives(tep_instance_for(8, 1, index, 1, small_pool))
    ratio_lp = obj["LP"] / obj["Exc"]
    ratio_yz = obj["RelYZ"] / obj["Exc"]
    assert 0.0 < ratio_lp <= ratio_yz + 1e-6
    assert ratio_yz <= 1.0 + 1e-6


def test_no_shedding_with_every_line_built(small_pool):
    asm = assemble_tep(tep_instance_for(5, 1, 0, 1, small_pool), "LP")
    arrays = asm.problem.arrays()
    build_index = [b.index for lines in asm.build_vars for b in lines]
    lower = arrays.lower.copy()
    lower[build_index] = 1.0
    result = solve_lp_arrays(arrays, lower=lower)
    assert result.status is SolveStatus.OPTIMAL
    assert tep_metrics(result.x, asm).load_shed == pytest.approx(0.0, abs=1e-7)
