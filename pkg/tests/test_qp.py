"""Tests for the ADMM quadratic program solver."""

import numpy as np
import pytest

from bess_bench.optmodel import Problem
from bess_bench.solver import AdmmQpSolver
from bess_bench.solver import InvalidSolveConfigError
from bess_bench.solver import SolveConfig
from bess_bench.solver import SolverInputError
from bess_bench.solver import SolveStatus
from bess_bench.solver import solve
from bess_bench.solver import solve_qp


def test_clipped_unconstrained_optimum():
    p = Problem()
    x = p.add_var(0.0, 1.0)
    p.add_sum_of_squares([x - 2])
    sol = solve_qp(p)
    assert sol.status is SolveStatus.OPTIMAL
    assert sol.value(x) == pytest.approx(1.0, abs=1e-6)
    assert sol.objective == pytest.approx(1.0, abs=1e-6)


def test_free_variable_minimum():
    p = Problem()
    x = p.add_var(-np.inf, np.inf)
    p.add_sum_of_squares([x])
    sol = solve_qp(p)
    assert sol.status is SolveStatus.OPTIMAL
    assert sol.value(x) == pytest.approx(0.0, abs=1e-6)


def test_equality_row_and_duals():
    p = Problem()
    x = p.add_var(-np.inf, np.inf)
    y = p.add_var(-np.inf, np.inf)
    p.add_constraint((x + y).equals(1))
    p.add_sum_of_squares([x, y])
    sol = solve_qp(p)
    assert sol.status is SolveStatus.OPTIMAL
    assert sol.value(x) == pytest.approx(0.5, abs=1e-6)
    assert sol.objective == pytest.approx(0.5, abs=1e-6)
    # gradient 2x = 1 on both coordinates, balanced by the row multiplier
    assert sol.duals[0] == pytest.approx(-1.0, abs=1e-5)


def test_infeasible_qp():
    p = Problem()
    x = p.add_var(0.0, 1.0)
    y = p.add_var(0.0, 1.0)
    p.add_constraint(x + y >= 3)
    p.add_sum_of_squares([x - y])
    assert solve_qp(p).status is SolveStatus.INFEASIBLE


def test_iteration_limit():
    p = Problem()
    xs = [p.add_var(0.0, 1.0) for _ in range(4)]
    p.add_constraint(sum(xs) >= 1.5)
    p.add_sum_of_squares([x - 0.1 * i for i, x in enumerate(xs)])
    sol = solve_qp(p, SolveConfig(max_iterations=2))
    assert sol.status is SolveStatus.LIMIT_REACHED


def test_rejects_binaries():
    p = Problem()
    x = p.add_var(binary=True)
    p.add_sum_of_squares([x])
    with pytest.raises(SolverInputError):
        solve_qp(p)


def test_dispatch_picks_qp_for_quadratic_objective():
    p = Problem()
    x = p.add_var(0.0, 4.0)
    p.add_sum_of_squares([x - 3])
    assert solve(p).value(x) == pytest.approx(3.0, abs=1e-6)


def projected_gradient(m, c, iterations=50_000):
    """Minimize ``|m x - c|^2`` over ``[0, 1]^n`` by projected gradient."""
    h = 2.0 * m.T @ m
    g0 = -2.0 * m.T @ c
    step = 1.0 / np.linalg.eigvalsh(h).max()
    x = np.full(m.shape[1], 0.5)
    for _ in range(iterations):
        new = np.clip(x - step * (h @ x + g0), 0.0, 1.0)
        if np.max(np.abs(new - x)) < 1e-13:
            return new
        x = new
    return x


def box_qp(seed, n=10, rows=15):
    rng = np.random.default_rng(100 + seed)
    m = rng.normal(size=(rows, n))
    c = rng.normal(size=rows) * 2.0
    p = Problem(f"box{seed}")
    xs = [p.add_var(0.0, 1.0) for _ in range(n)]
    p.add_sum_of_squares(
        [sum(float(v) * x for v, x in zip(row, xs)) - float(ci) for row, ci in zip(m, c)]
    )
    return p, m, c


def check_box_kkt(sol, m, c, tol=1e-6):
    x = sol.values
    gradient = 2.0 * m.T @ (m @ x - c)
    np.testing.assert_allclose(gradient + sol.bound_duals, 0.0, atol=tol * max(1.0, np.abs(gradient).max()))
    interior = (x > 1e-6) & (x < 1.0 - 1e-6)
    assert np.all(np.abs(sol.bound_duals[interior]) <= tol * max(1.0, np.abs(gradient).max()))
    assert np.all(sol.bound_duals[x <= 1e-6] <= tol)
    assert np.all(sol.bound_duals[x >= 1.0 - 1e-6] >= -tol)


@pytest.mark.parametrize("seed", range(5))
def test_random_box_qp_matches_projected_gradient(seed):
    p, m, c = box_qp(seed)
    sol = solve_qp(p)
    oracle = projected_gradient(m, c)

    assert sol.status is SolveStatus.OPTIMAL
    expected = float(np.sum((m @ oracle - c) ** 2))
    assert sol.objective == pytest.approx(expected, abs=1e-6)
    np.testing.assert_allclose(sol.values, oracle, atol=1e-4)
    check_box_kkt(sol, m, c)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(5, 200))
def test_random_box_qp_many(seed):
    p, m, c = box_qp(seed)
    sol = solve_qp(p)
    oracle = projected_gradient(m, c)
    assert sol.status is SolveStatus.OPTIMAL
    assert sol.objective <= float(np.sum((m @ oracle - c) ** 2)) + 1e-6
    check_box_kkt(sol, m, c)


def test_bound_changes_reuse_factorization():
    p = Problem()
    x = p.add_var(0.0, 10.0)
    p.add_sum_of_squares([x - 5])
    solver = AdmmQpSolver(p.arrays(), SolveConfig())
    first = solver.solve()
    second = solver.solve(np.array([0.0]), np.array([2.0]))
    assert first.x[0] == pytest.approx(5.0, abs=1e-6)
    assert second.x[0] == pytest.approx(2.0, abs=1e-6)


def test_warm_start_from_own_iterate():
    p, _, _ = box_qp(7)
    solver = AdmmQpSolver(p.arrays(), SolveConfig())
    first = solver.solve()
    again = solver.solve(warm=first.iterate)
    assert again.status is SolveStatus.OPTIMAL
    assert again.iterations <= first.iterations
    assert again.objective == pytest.approx(first.objective, abs=1e-7)


def test_warm_start_after_bound_change():
    p = Problem()
    x = p.add_var(0.0, 10.0)
    y = p.add_var(0.0, 10.0)
    p.add_constraint((x + y).equals(6))
    p.add_sum_of_squares([x - 5, y - 4])
    solver = AdmmQpSolver(p.arrays(), SolveConfig())
    parent = solver.solve()
    child = solver.solve(np.array([0.0, 0.0]), np.array([2.0, 10.0]), warm=parent.iterate)
    assert child.status is SolveStatus.OPTIMAL
    assert child.x[0] == pytest.approx(2.0, abs=1e-6)
    assert child.x[1] == pytest.approx(4.0, abs=1e-6)


@pytest.mark.parametrize("scale", [1.0, 1e3])
def test_equality_rho_scale(scale):
    p = Problem()
    x = p.add_var(-10.0, 10.0)
    y = p.add_var(-10.0, 10.0)
    p.add_constraint((x + 2 * y).equals(3))
    p.add_sum_of_squares([x, y])
    sol = solve_qp(p, SolveConfig(rho_eq_scale=scale))
    assert sol.status is SolveStatus.OPTIMAL
    assert sol.value(x) == pytest.approx(0.6, abs=1e-6)
    assert sol.value(y) == pytest.approx(1.2, abs=1e-6)


def test_rho_eq_scale_from_config():
    cfg = SolveConfig.from_config({"RHO_EQ_SCALE": 50.0})
    assert cfg.rho_eq_scale == 50.0
    with pytest.raises(InvalidSolveConfigError):
        SolveConfig(rho_eq_scale=0.0)
