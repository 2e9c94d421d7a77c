import numpy as np
import pytest
from hypothesis import given

import discrete_nash.branching as branching
from discrete_nash import (IntBox, SearchOptions, count_points, enumerate_equilibria, make_problem,
                           select_branch_index, solve_all, solve_all_improved, solve_one)

from conftest import small_games

EXPECTED = {
    1: [(3, 6), (4, 5), (5, 4), (6, 3)],
    2: [],
    3: [(-1, -1), (1, 1), (2, 2)],
    4: [(-5, 4, 5, -5), (5, -5, -5, 5)],
}


@pytest.mark.parametrize("improved", [False, True])
@pytest.mark.parametrize("discipline", ["fifo", "lifo"])
def test_examples(example, improved, discipline):
    k, problem = example
    res = solve_all(problem, improved=improved, discipline=discipline)
    assert res.equilibria == EXPECTED[k]
    assert res.stats.complete and res.stats.eq_count == len(EXPECTED[k])


def test_improved_shrink_share(ex1, ex3):
    res = solve_all_improved(ex1)
    assert res.stats.points_cut_by_shrink == 84 and res.stats.feasible_total == 100
    assert solve_all_improved(ex3).stats.points_cut_by_shrink == 0


def test_solve_one(ex1, ex2):
    point, res = solve_one(ex1)
    assert point in EXPECTED[1]
    point, res = solve_one(ex2)
    assert point is None and res.stats.complete


def test_solve_one_singleton_box():
    p = make_problem([([[1]], np.zeros((1, 0)), [0], [2], [2])])
    assert solve_one(p)[0] == (2,)


def test_branch_index():
    assert select_branch_index([4.5, 4.5]) == 0
    assert select_branch_index([3, 2.2]) == 1
    with pytest.raises(ValueError):
        select_branch_index([3, 6])


def test_node_limit_is_flagged(ex4):
    res = solve_all(ex4, max_nodes=3)
    assert not res.stats.complete


def test_bad_discipline():
    with pytest.raises(ValueError):
        SearchOptions(discipline="random")


def test_first_stats_on_example1(ex1):
    s = solve_all(ex1).stats
    assert s.oracle_calls_at_first <= s.oracle_calls_at_last <= s.oracle_calls_total
    assert s.oracle_calls_unique == s.oracle_calls_total


def test_non_converging_relaxation_falls_back(ex1, monkeypatch):
    from discrete_nash.continuous import ContinuousSolution

    def never(problem, box, tol, max_iter):
        return ContinuousSolution(np.full(problem.n, np.nan), np.inf, 0, False, "stub")

    monkeypatch.setattr(branching, "solve_continuous", never)
    res = solve_all(ex1)
    assert res.equilibria == EXPECTED[1] and res.stats.fallback_enumerations == 1


def test_fallback_splits_when_over_budget(ex1, monkeypatch):
    from discrete_nash.continuous import ContinuousSolution

    def never(problem, box, tol, max_iter):
        return ContinuousSolution(np.full(problem.n, np.nan), np.inf, 0, False, "stub")

    monkeypatch.setattr(branching, "solve_continuous", never)
    res = solve_all(ex1, budget=30)
    assert res.equilibria == EXPECTED[1] and res.stats.fallback_enumerations > 1


@given(small_games())
def test_matches_brute_force(problem):
    assert solve_all(problem).equilibria == enumerate_equilibria(problem)


@given(small_games())
def test_fifo_and_lifo_agree(problem):
    assert solve_all(problem, discipline="fifo").equilibria == solve_all(problem, discipline="lifo").equilibria


@given(small_games())
def test_stats_accounting(problem):
    cuts = []
    real = branching.fixing_box
    with pytest.MonkeyPatch.context() as mp:
        def spy(p, Y, x):
            B = real(p, Y, x)
            cuts.append(count_points(Y) - count_points(Y.intersect(B)))
            return B
        mp.setattr(branching, "fixing_box", spy)
        s = solve_all(problem, improved=True).stats
    assert s.points_cut_by_F == sum(cuts)
    assert s.points_cut_by_shrink + s.points_cut_by_F + s.oracle_calls_total == s.feasible_total
    assert min(s.as_dict()[k] for k in ("nodes_processed", "points_cut_by_F", "oracle_calls_total")) >= 0


@given(small_games())
def test_children_shrink_strictly(problem):
    pushed = []
    with pytest.MonkeyPatch.context() as mp:
        real_process = branching._Search.process

        def process(self, Y):
            before = len(self.queue)
            real_process(self, Y)
            for child in list(self.queue)[before:] if self.opts.discipline == "fifo" else []:
                pushed.append((Y, child))
        mp.setattr(branching._Search, "process", process)
        solve_all(problem)
    for parent, child in pushed:
        assert child.is_finite() and not child.is_empty()
        assert count_points(child) < count_points(parent)
        assert np.all(child.lo >= parent.lo) and np.all(child.hi <= parent.hi)
