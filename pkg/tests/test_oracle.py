import numpy as np
import pytest
from hypothesis import given, strategies as st

from discrete_nash import (BudgetExceededError, IntBox, best_response, enumerate_equilibria, is_equilibrium,
                           make_problem, theta)
from discrete_nash.oracle import _best_response

from conftest import brute_equilibria, small_games


def test_example1_best_responses(ex1):
    br = best_response(ex1, 0, [6])
    assert br.argmins.tolist() == [[3]] and br.value == pytest.approx(-49.5)
    assert best_response(ex1, 1, [3]).argmins.tolist() == [[6]]


def test_unconstrained_minimum_at_origin():
    p = make_problem([([[1]], np.zeros((1, 0)), [0], [-5], [5])])
    assert best_response(p, 0, []).argmins.tolist() == [[0]]


def test_ties_return_whole_set():
    # theta = 0.5 t^2 - 0.5 t has minimisers 0 and 1
    p = make_problem([([[1]], np.zeros((1, 0)), [-0.5], [-3], [3])])
    br = best_response(p, 0, [])
    assert br.argmins.tolist() == [[0], [1]] and len(br) == 2 and [1] in br


def test_is_equilibrium_examples(ex1, ex2):
    assert is_equilibrium(ex1, [3, 6])
    assert not is_equilibrium(ex1, [4, 4])
    assert not is_equilibrium(ex2, [0, 0])


def test_is_equilibrium_rejects_bad_points(ex1):
    with pytest.raises(ValueError):
        is_equilibrium(ex1, [3.5, 6])
    with pytest.raises(ValueError):
        is_equilibrium(ex1, [10, 0])


def test_enumeration_examples(ex1, ex2, ex3, ex4):
    assert enumerate_equilibria(ex1) == [(3, 6), (4, 5), (5, 4), (6, 3)]
    assert enumerate_equilibria(ex2) == []
    assert enumerate_equilibria(ex3) == [(-1, -1), (1, 1), (2, 2)]
    assert enumerate_equilibria(ex4) == [(-5, 4, 5, -5), (5, -5, -5, 5)]


def test_sub_box_keeps_deviations_over_full_set(ex3):
    # (0,0) solves the game restricted to [0,2]^2 but is not an equilibrium of the full game
    inside = enumerate_equilibria(ex3, IntBox([0, 0], [2, 2]))
    assert inside == [(1, 1), (2, 2)]


def test_budget_is_enforced(ex1):
    with pytest.raises(BudgetExceededError):
        enumerate_equilibria(ex1, budget=50)
    Q = np.eye(3) + 0.1
    with pytest.raises(BudgetExceededError):
        _best_response(Q, np.zeros(3), np.full(3, -50), np.full(3, 50), budget=1000, method="enumerate")


@given(small_games())
def test_enumeration_matches_naive_loop(problem):
    if problem.box.count() > 1500:
        return
    assert enumerate_equilibria(problem) == brute_equilibria(problem)


@given(small_games(), st.integers(0, 2**31 - 1))
def test_lattice_agrees_with_enumeration(problem, seed):
    rng = np.random.default_rng(seed)
    for nu in range(problem.n_players):
        p = problem.players[nu]
        g = rng.uniform(-3, 3, size=p.size)
        fast = _best_response(p.Q, g, p.l, p.u)
        slow = _best_response(p.Q, g, p.l, p.u, method="enumerate")
        np.testing.assert_array_equal(fast.argmins, slow.argmins)
        assert fast.value == pytest.approx(slow.value, abs=1e-9)


@given(small_games(), st.integers(0, 2**31 - 1), st.floats(-1e3, 1e3))
def test_argmin_ignores_constant_shift(problem, seed, const):
    # adding a constant to theta_nu leaves every comparison unchanged
    rng = np.random.default_rng(seed)
    p = problem.players[0]
    g = rng.uniform(-3, 3, size=p.size)
    Y = IntBox(p.l, p.u).as_array().astype(float)
    vals = 0.5 * np.einsum("ij,jk,ik->i", Y, p.Q, Y) + Y @ g
    shifted = vals + const
    best = Y[np.isclose(shifted, shifted.min(), rtol=0, atol=1e-9 * max(1, abs(shifted.min())))]
    ref = _best_response(p.Q, g, p.l, p.u)
    np.testing.assert_array_equal(ref.argmins, best.astype(int))


@given(small_games())
def test_equilibria_survive_every_unilateral_deviation(problem):
    if problem.box.count() > 2000:
        return
    X = problem.box.as_array()
    for x in enumerate_equilibria(problem):
        x = np.array(x)
        for nu in range(problem.n_players):
            blk = problem.block(nu)
            base = theta(problem, nu, x)
            for y in np.unique(X[:, blk], axis=0):
                z = x.copy()
                z[blk] = y
                assert theta(problem, nu, z) >= base - 1e-9 * max(1, abs(base))


@given(small_games(), st.integers(0, 2**31 - 1))
def test_enumeration_on_subbox_is_restriction(problem, seed):
    if problem.box.count() > 2000:
        return
    rng = np.random.default_rng(seed)
    a = rng.integers(problem.lower, problem.upper + 1)
    b = rng.integers(problem.lower, problem.upper + 1)
    sub = IntBox(np.minimum(a, b), np.maximum(a, b))
    full = enumerate_equilibria(problem)
    assert enumerate_equilibria(problem, sub) == [x for x in full if sub.contains(x)]
