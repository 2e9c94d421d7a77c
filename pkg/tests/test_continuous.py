import numpy as np
import pytest
from hypothesis import given, strategies as st

from discrete_nash import IntBox, eval_F, is_equilibrium, natural_residual, round_near_integers, solve_continuous
from discrete_nash.continuous import DEFAULT_TOL
from discrete_nash.model import Problem

from conftest import small_games


def test_example1_interior_solution(ex1):
    sol = solve_continuous(ex1)
    assert sol.converged
    np.testing.assert_allclose(sol.x, [4.5, 4.5], atol=1e-8)


def test_example1_corner(ex1):
    sol = solve_continuous(ex1, IntBox([5, 5], [9, 9]))
    np.testing.assert_allclose(sol.x, [5, 5], atol=1e-10)


def test_example3_restricted_box(ex3):
    sol = solve_continuous(ex3, IntBox([0, 0], [2, 2]))
    assert sol.converged
    np.testing.assert_allclose(sol.x, [0, 0], atol=1e-8)


def test_natural_residual_zero_at_solutions(ex1):
    assert natural_residual(ex1, None, [4.5, 4.5]) == pytest.approx(0, abs=1e-12)
    assert natural_residual(ex1, IntBox([5, 5], [9, 9]), [5, 5]) == 0
    assert natural_residual(ex1, None, [0, 0]) > 1


def test_rounding():
    x, ok = round_near_integers([4.5, 4.5], 1e-10)
    assert not ok and x[0] == 4.5
    x, ok = round_near_integers([5 - 1e-12, 5], 1e-10)
    assert ok and list(x) == [5, 5]
    x, ok = round_near_integers([2.9999999, 3], 1e-10)
    assert not ok and x[0] == 2.9999999


def _random_subbox(problem: Problem, rng):
    a = rng.integers(problem.lower, problem.upper + 1)
    b = rng.integers(problem.lower, problem.upper + 1)
    return IntBox(np.minimum(a, b), np.maximum(a, b))


@given(small_games(), st.integers(0, 2**31 - 1))
def test_converges_and_certifies_vi(problem, seed):
    rng = np.random.default_rng(seed)
    box = _random_subbox(problem, rng)
    sol = solve_continuous(problem, box)
    assert sol.converged
    F = eval_F(problem, sol.x)
    for _ in range(20):
        y = rng.uniform(box.lo, box.hi)
        gap = float(F @ (y - sol.x))
        assert gap >= -problem.n * DEFAULT_TOL * max(np.max(np.abs(y - sol.x)), 1e-300) - 1e-12


@given(small_games())
def test_integral_relaxation_is_an_equilibrium(problem):
    sol = solve_continuous(problem)
    x, integral = round_near_integers(sol.x)
    if integral:
        assert is_equilibrium(problem, x.astype(int))


def test_hundred_pd_instances_converge():
    from discrete_nash import generate

    for seed in range(100):
        p = generate(3, 2, (-5, 5), (-50, 50), 0.3, (0.05, 3.0), seed=seed)
        assert solve_continuous(p).converged


def test_non_monotone_reports_honestly():
    # symmetric part indefinite: strong antisymmetric coupling is fine, but this one is not monotone
    from discrete_nash import make_problem

    p = make_problem([([[1.0]], [[5.0]], [0.0], [-3], [3]), ([[1.0]], [[5.0]], [0.0], [-3], [3])])
    sol = solve_continuous(p, max_iter=200)
    if sol.converged:
        assert natural_residual(p, None, sol.x) <= 1e-6
