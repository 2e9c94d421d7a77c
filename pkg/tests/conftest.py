import sys
import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from discrete_nash import generate, generate_two_groups, load_example

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# (players, vars per player, bounds) with at most a few thousand points
SMALL_SHAPES = [
    (1, 1, (-5, 5)), (1, 2, (-4, 4)), (2, 1, (-5, 5)), (2, 1, (0, 9)),
    (2, 2, (-2, 2)), (3, 1, (-3, 3)), (2, 3, (-1, 1)), (3, 2, (-1, 1)),
]


@st.composite
def small_games(draw, two_groups=False):
    players, nv, bounds = draw(st.sampled_from(SMALL_SHAPES))
    h = draw(st.sampled_from([0.0, 0.01, 0.1, 0.5]))
    seed = draw(st.integers(0, 2**31 - 1))
    b_scale = draw(st.sampled_from([1.0, 3.0]))
    maker = generate_two_groups if two_groups else generate
    return maker(players, nv, (-b_scale, b_scale), bounds, h, (0.1, 2.0), seed=seed)


@pytest.fixture(params=[1, 2, 3, 4], ids=lambda k: f"ex{k}")
def example(request):
    return request.param, load_example(request.param)


@pytest.fixture
def ex1():
    return load_example(1)


@pytest.fixture
def ex2():
    return load_example(2)


@pytest.fixture
def ex3():
    return load_example(3)


@pytest.fixture
def ex4():
    return load_example(4)


def brute_equilibria(problem):
    """Independent check: loop over points and deviations with plain theta."""
    from discrete_nash import theta

    X = problem.box.as_array()
    found = []
    for x in X:
        ok = True
        for nu in range(problem.n_players):
            blk = problem.block(nu)
            base = theta(problem, nu, x)
            sub = problem.box.as_array()[:, blk]
            for y in np.unique(sub, axis=0):
                z = x.copy()
                z[blk] = y
                if theta(problem, nu, z) < base - 1e-9 * max(1.0, abs(base)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(tuple(int(v) for v in x))
    return found


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.REPORT):
        terminalreporter.write_line(module.REPORT[number])
