"""Small reference games with known equilibrium sets."""
from __future__ import annotations

from .model import Problem, make_problem


def load_example(number: int) -> Problem:
    """Return one of the four textbook games (1-based numbering).

    1. symmetric two-player game on ``[0, 9]^2`` with four equilibria
    2. strongly monotone game on ``[0, 9]^2`` without equilibria
    3. game on ``[-1, 2]^2`` whose restricted relaxation misleads a naive cut
    4. two players with two variables each on ``[-5, 5]^4``
    """
    try:
        return _BUILDERS[number]()
    except KeyError:
        raise ValueError(f"unknown example {number}; choose from {sorted(_BUILDERS)}") from None


def _example1():
    return make_problem([
        ([[9]], [[7]], [-72], [0], [9]),
        ([[9]], [[7]], [-72], [0], [9]),
    ])


def _example2():
    return make_problem([
        ([[1]], [[1]], [-9], [0], [9]),
        ([[1]], [[-1]], [0], [0], [9]),
    ])


def _example3():
    return make_problem([
        ([[7 / 8]], [[-1]], [0.5], [-1], [2]),
        ([[1]], [[-3 / 4]], [0], [-1], [2]),
    ])


def _example4():
    return make_problem([
        ([[3, 1], [1, 3]], [[4, -3], [-1, 1]], [7, 2], [-5, -5], [5, 5]),
        ([[2, 1], [1, 2]], [[1, -2], [-3, 4]], [5, 6], [-5, -5], [5, 5]),
    ])


_BUILDERS = {1: _example1, 2: _example2, 3: _example3, 4: _example4}
