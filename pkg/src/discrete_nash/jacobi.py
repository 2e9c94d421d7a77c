"""Best-response dynamics for games whose variables split into two groups.

Within a group cross-partials are nonpositive, across groups nonnegative.
Starting group one at its lower bounds and group two at its upper bounds,
and always picking the best response that pushes group one up and group two
down, every iterate moves monotonically, so the dynamics stop at an
equilibrium after a bounded number of steps.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .model import Problem
from .oracle import DEFAULT_BUDGET, _best_response, is_equilibrium, tie_tolerance

logger = logging.getLogger(__name__)

SCHEDULES = ("gauss-seidel", "jacobi", "gauss-southwell")


class PartitionError(ValueError):
    """No two-group split satisfies the sign conditions."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Partition:
    """``groups[k]`` is 1 or 2 for every global variable index ``k``."""

    groups: tuple[int, ...]

    @property
    def G1(self) -> list[int]:
        return [k for k, g in enumerate(self.groups) if g == 1]

    @property
    def G2(self) -> list[int]:
        return [k for k, g in enumerate(self.groups) if g == 2]

    def mask(self) -> np.ndarray:
        """True for group-one indices."""
        return np.array([g == 1 for g in self.groups], dtype=bool)

    def is_valid_for(self, problem: Problem) -> bool:
        M = problem.matrix.M
        g1 = self.mask()
        same = g1[:, None] == g1[None, :]
        off = ~np.eye(problem.n, dtype=bool)
        return bool(np.all(M[same & off] <= 0) and np.all(M[~same] >= 0))


def detect_partition(problem: Problem) -> Partition:
    """Exact two-colouring of the variable sign graph.

    A positive entry in either direction forces two variables apart, a
    negative one forces them together; a pair with both signs is
    contradictory.  Raises ``PartitionError`` with a witness otherwise.
    """
    M = problem.matrix.M
    n = problem.n
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a, b = M[i, j], M[j, i]
            if (a > 0 and b < 0) or (a < 0 and b > 0):
                raise PartitionError(f"entries ({i},{j}) and ({j},{i}) have opposite signs", (i, j))
            if a > 0 or b > 0:
                parity = 1
            elif a < 0 or b < 0:
                parity = 0
            else:
                continue
            adj[i].append((j, parity))
            adj[j].append((i, parity))
    colour = [-1] * n
    for root in range(n):
        if colour[root] >= 0:
            continue
        colour[root] = 0
        todo = deque([root])
        while todo:
            i = todo.popleft()
            for j, parity in adj[i]:
                want = colour[i] ^ parity
                if colour[j] < 0:
                    colour[j] = want
                    todo.append(j)
                elif colour[j] != want:
                    raise PartitionError(f"odd sign cycle through variables {i} and {j}", (i, j))
    return Partition(tuple(1 + c for c in colour))


def first_row_partition(problem: Problem) -> Partition:
    """Heuristic split read off the first row of the Jacobian."""
    row = problem.matrix.M[0]
    return Partition(tuple(1 if k == 0 or row[k] <= 0 else 2 for k in range(problem.n)))


def step_bound(problem: Problem, h: int) -> int:
    """Worst-case number of steps with a fairness window of ``h``."""
    if h < 1:
        raise ValueError("h must be at least 1")
    span = int(np.sum(problem.upper.astype(object) - problem.lower.astype(object)))
    return h * span + h


def fairness_window(problem: Problem, schedule: str) -> int:
    if schedule == "jacobi":
        return 1
    if schedule in ("gauss-seidel", "gauss-southwell"):
        return problem.n_players
    raise ValueError(f"unknown schedule {schedule!r}; choose from {SCHEDULES}")


@dataclass
class JacobiResult:
    point: tuple[int, ...] | None
    converged: bool
    steps: int
    best_responses: int
    sweeps: int = 0  # rounds in which every scheduled player had one turn
    trace: list[tuple[int, ...]] = field(default_factory=list)
    monotone: bool = True


def _monotone_pick(argmins: np.ndarray, g1: np.ndarray) -> np.ndarray:
    # lexicographic: largest group-one entries, smallest group-two entries
    keys = np.where(g1[None, :], argmins, -argmins)
    order = np.lexsort(keys.T[::-1])
    return argmins[order[-1]]


def jacobi_solve(problem: Problem, partition: Partition | None = None, schedule: str = "gauss-seidel",
                 max_steps: int | None = None, budget: int = DEFAULT_BUDGET,
                 keep_trace: bool = True) -> JacobiResult:
    """Run best-response dynamics from the two-group corner start.

    ``partition`` defaults to :func:`detect_partition`, falling back to
    :func:`first_row_partition` when no valid split exists.  The returned
    point has been checked with :func:`is_equilibrium`.  Failure within
    ``max_steps`` (default: the worst-case bound) proves nothing unless the
    partition is valid.
    """
    h = fairness_window(problem, schedule)
    if partition is None:
        try:
            partition = detect_partition(problem)
        except PartitionError:
            partition = first_row_partition(problem)
    if len(partition.groups) != problem.n:
        raise ValueError("partition does not cover every variable")
    if max_steps is None:
        max_steps = step_bound(problem, h)
    g1 = partition.mask()
    x = np.where(g1, problem.lower, problem.upper).astype(np.int64)
    N = problem.n_players
    blocks = [problem.block(nu) for nu in range(N)]
    others = [problem.others(nu) for nu in range(N)]
    players = problem.players

    def respond(nu, x):
        p = players[nu]
        g = p.C @ x[others[nu]].astype(float) + p.b
        br = _best_response(p.Q, g, p.l, p.u, budget)
        own = x[blocks[nu]].astype(float)
        gain = float(0.5 * own @ p.Q @ own + g @ own) - br.value
        return _monotone_pick(br.argmins, g1[blocks[nu]]), gain

    trace = [tuple(int(v) for v in x)] if keep_trace else []
    monotone = True
    idle = 0
    calls = 0
    step = 0
    rounds = 0
    while step < max_steps:
        step += 1
        if schedule == "gauss-seidel":
            players_now = [(step - 1) % N]
            if (step - 1) % N == 0:
                rounds += 1
        elif schedule == "jacobi":
            players_now = list(range(N))
            rounds += 1
        else:
            rounds += 1
            gains = []
            for nu in range(N):
                y, gain = respond(nu, x)
                calls += 1
                gains.append((gain, -nu, y))
            gain, neg_nu, y = max(gains, key=lambda t: (t[0], t[1]))
            if gain <= tie_tolerance(gain):
                # nobody improves: current profile is a best response for all
                idle = h
            else:
                new = x.copy()
                new[blocks[-neg_nu]] = y
                monotone &= _moved_monotonically(x, new, g1)
                x = new
                idle = 0
                if keep_trace:
                    trace.append(tuple(int(v) for v in x))
            if idle >= h:
                break
            continue

        new = x.copy()
        for nu in players_now:
            y, _ = respond(nu, x)
            calls += 1
            new[blocks[nu]] = y
        if np.array_equal(new, x):
            idle += len(players_now) if schedule == "gauss-seidel" else h
        else:
            monotone &= _moved_monotonically(x, new, g1)
            x = new
            idle = 0
            if keep_trace:
                trace.append(tuple(int(v) for v in x))
        if idle >= h:
            break

    point = tuple(int(v) for v in x)
    converged = idle >= h and is_equilibrium(problem, x, budget)
    if not converged:
        logger.info("no equilibrium reached within %d steps", max_steps)
    return JacobiResult(point if converged else None, converged, step, calls, rounds, trace, monotone)


def _moved_monotonically(old, new, g1) -> bool:
    return bool(np.all(new[g1] >= old[g1]) and np.all(new[~g1] <= old[~g1]))
