import numpy as np
import pytest
from hypothesis import given, strategies as st

import discrete_nash.branching as branching
from discrete_nash import IntBox, box_intersect, complement_boxes, enumerate_equilibria, fixing_box, solve_all

from conftest import small_games


def test_example3_fixing_box_fires_nothing(ex3):
    B = fixing_box(ex3, IntBox([0, 0], [2, 2]), [0, 0])
    assert B == IntBox.full(2)


def test_example1_fixing_box_caps_both(ex1):
    Y = IntBox([5, 5], [9, 9])
    B = fixing_box(ex1, Y, [5, 5])
    assert B == IntBox([-np.inf, -np.inf], [5, 5])
    assert box_intersect(Y, B) == IntBox([5, 5], [5, 5])


@given(small_games(), st.integers(0, 2**31 - 1))
def test_interior_point_fires_nothing(problem, seed):
    rng = np.random.default_rng(seed)
    Y = IntBox(problem.lower - 1, problem.upper + 1)
    x = rng.integers(problem.lower, problem.upper + 1)
    assert fixing_box(problem, Y, x) == IntBox.full(problem.n)


def test_complement_boxes_small_cases():
    inf = np.inf
    assert complement_boxes([0]) == [IntBox([1], [inf]), IntBox([-inf], [-1])]
    assert complement_boxes([3, 6]) == [
        IntBox([4, -inf], [inf, inf]), IntBox([-inf, -inf], [2, inf]),
        IntBox([3, 7], [3, inf]), IntBox([3, -inf], [3, 5]),
    ]
    with pytest.raises(ValueError):
        complement_boxes([0.5])


def test_box_intersect_examples():
    assert box_intersect(IntBox([0, 0], [9, 9]), IntBox([-np.inf, -np.inf], [5, np.inf])) == IntBox([0, 0], [5, 9])
    assert box_intersect(IntBox([0], [5]), IntBox([6], [np.inf])) is None


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 4)), min_size=1, max_size=3), st.data())
def test_complement_boxes_partition(sides, data):
    Y = IntBox([a for a, _ in sides], [a + w for a, w in sides])
    x = tuple(data.draw(st.integers(a, a + w)) for a, w in sides)
    seen = []
    for B in complement_boxes(x):
        part = Y.intersect(B)
        if not part.is_empty():
            seen.extend(part.points())
    assert sorted(seen) == sorted(p for p in Y.points() if p != x)
    assert len(seen) == len(set(seen))


def _record_fixing(monkeypatch):
    calls = []
    real = branching.fixing_box

    def spy(problem, Y, xbar):
        B = real(problem, Y, xbar)
        calls.append((Y, np.array(xbar), B))
        return B

    monkeypatch.setattr(branching, "fixing_box", spy)
    return calls


@given(small_games(), st.booleans())
def test_fixing_box_never_cuts_an_equilibrium(problem, improved):
    with pytest.MonkeyPatch.context() as mp:
        calls = _record_fixing(mp)
        solve_all(problem, improved=improved)
    eqs = enumerate_equilibria(problem)
    for Y, _, B in calls:
        for e in eqs:
            if Y.contains(e):
                assert B.contains(e), (Y, B, e)
