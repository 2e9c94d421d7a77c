"""Complete enumeration of equilibria by branching with sound pruning.

Each node is a sub-box ``Y`` of the strategy space.  The relaxed game on
``Y`` is solved; the fixing rule discards the part of ``Y`` that provably
holds no equilibrium; an integral relaxed solution is tested and carved out
of the box, a fractional one is split on a fractional coordinate.  Every
integer point of the root box ends up either discarded by a cut or tested,
exactly once, so the search terminates with the full equilibrium set.
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import asdict, dataclass, field

import numpy as np

from .continuous import DEFAULT_MAX_ITER, DEFAULT_ROUND_EPS, DEFAULT_TOL, round_near_integers, solve_continuous
from .model import IntBox, Problem, count_points
from .oracle import DEFAULT_BUDGET, is_equilibrium
from .pruning import complement_boxes, fixing_box
from .shrink import shrink_fixed_point

logger = logging.getLogger(__name__)


@dataclass
class SearchOptions:
    improved: bool = False
    discipline: str = "fifo"
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    round_eps: float = DEFAULT_ROUND_EPS
    max_nodes: int | None = None
    budget: int = DEFAULT_BUDGET
    first_only: bool = False

    def __post_init__(self):
        if self.discipline not in ("fifo", "lifo"):
            raise ValueError(f"discipline must be 'fifo' or 'lifo', got {self.discipline!r}")
        if self.max_nodes is not None and self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")


@dataclass
class SearchStats:
    eq_count: int = 0
    oracle_calls_total: int = 0
    oracle_calls_unique: int = 0
    oracle_calls_at_first: int | None = None
    oracle_calls_at_last: int | None = None
    nodes_processed: int = 0
    points_cut_by_shrink: int = 0
    points_cut_by_F: int = 0
    feasible_total: int = 0
    continuous_solves: int = 0
    fallback_enumerations: int = 0
    complete: bool = True

    def percent(self, count) -> float | None:
        if count is None or self.feasible_total == 0:
            return None
        return 100.0 * count / self.feasible_total

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class SearchResult:
    equilibria: list[tuple[int, ...]]
    stats: SearchStats
    bounds: tuple[np.ndarray, np.ndarray] | None = None
    _tested: set = field(default_factory=set, repr=False)


def select_branch_index(xbar) -> int:
    """Lowest index of a fractional coordinate."""
    x = np.asarray(xbar, dtype=float)
    frac = np.flatnonzero(x != np.floor(x))
    if frac.size == 0:
        raise ValueError("point is integral; nothing to branch on")
    return int(frac[0])


class _Search:
    def __init__(self, problem: Problem, opts: SearchOptions):
        self.problem = problem
        self.opts = opts
        self.stats = SearchStats(feasible_total=count_points(problem.box))
        self.found: list[tuple[int, ...]] = []
        self.tested: set[tuple[int, ...]] = set()
        self.queue: deque[IntBox] = deque()
        self.done = False

    def _oracle(self, point) -> None:
        key = tuple(int(v) for v in point)
        self.stats.oracle_calls_total += 1
        if key in self.tested:
            return
        self.tested.add(key)
        self.stats.oracle_calls_unique += 1
        if is_equilibrium(self.problem, np.array(key), self.opts.budget):
            self.found.append(key)
            if self.stats.oracle_calls_at_first is None:
                self.stats.oracle_calls_at_first = self.stats.oracle_calls_total
            self.stats.oracle_calls_at_last = self.stats.oracle_calls_total
            if self.opts.first_only:
                self.done = True

    def _push(self, box: IntBox | None) -> None:
        if box is not None and not box.is_empty():
            self.queue.append(box)

    def _pop(self) -> IntBox:
        return self.queue.popleft() if self.opts.discipline == "fifo" else self.queue.pop()

    def _fallback(self, Y: IntBox) -> None:
        self.stats.fallback_enumerations += 1
        size = count_points(Y)
        if size <= self.opts.budget:
            for point in Y.points():
                self._oracle(point)
                if self.done:
                    return
            return
        widths = Y.hi - Y.lo
        i = int(np.argmax(widths))
        mid = math.floor((Y.lo[i] + Y.hi[i]) / 2)
        self._push(Y.with_bounds(i, hi=mid))
        self._push(Y.with_bounds(i, lo=mid + 1))

    def process(self, Y: IntBox) -> None:
        opts = self.opts
        self.stats.nodes_processed += 1
        self.stats.continuous_solves += 1
        sol = solve_continuous(self.problem, Y, opts.tol, opts.max_iter)
        if not sol.converged:
            logger.debug("relaxation did not converge on %r (residual %.3g)", Y, sol.residual)
            self._fallback(Y)
            return
        # the relaxed point must stay inside Y after rounding
        x, integral = round_near_integers(np.clip(sol.x, Y.lo, Y.hi), opts.round_eps)
        B = fixing_box(self.problem, Y, x)
        YB = Y.intersect(B)
        self.stats.points_cut_by_F += count_points(Y) - count_points(YB)
        if integral:
            self._oracle(x)
            if self.done:
                return
            for Bi in complement_boxes(x):
                self._push(YB.intersect(Bi))
        else:
            i = select_branch_index(x)
            self._push(YB.with_bounds(i, lo=math.ceil(x[i])))
            self._push(YB.with_bounds(i, hi=math.floor(x[i])))

    def run(self, root: IntBox) -> SearchResult:
        self._push(root)
        while self.queue and not self.done:
            if self.opts.max_nodes is not None and self.stats.nodes_processed >= self.opts.max_nodes:
                self.stats.complete = False
                logger.warning("node limit %d reached with %d boxes pending",
                               self.opts.max_nodes, len(self.queue))
                break
            self.process(self._pop())
        if self.done:
            # stopping at the first equilibrium leaves the rest of the tree unexplored
            self.stats.complete = not self.queue
        self.stats.eq_count = len(self.found)
        return SearchResult(sorted(self.found), self.stats, _tested=self.tested)


def _coerce_options(opts: SearchOptions | None, **overrides) -> SearchOptions:
    if opts is None:
        opts = SearchOptions()
    if overrides:
        values = asdict(opts)
        values.update(overrides)
        opts = SearchOptions(**values)
    return opts


def solve_all(problem: Problem, opts: SearchOptions | None = None, **overrides) -> SearchResult:
    """All equilibria of ``problem``; with ``improved=True`` the search starts
    from the shrunken box instead of the full one."""
    opts = _coerce_options(opts, **overrides)
    search = _Search(problem, opts)
    root = problem.box
    bounds = None
    if opts.improved:
        l_star, u_star = shrink_fixed_point(problem)
        bounds = (l_star, u_star)
        root = IntBox(l_star, u_star)
        search.stats.points_cut_by_shrink = search.stats.feasible_total - count_points(root)
    result = search.run(root)
    result.bounds = bounds
    return result


def solve_all_improved(problem: Problem, opts: SearchOptions | None = None, **overrides) -> SearchResult:
    return solve_all(problem, opts, **{**overrides, "improved": True})


def solve_one(problem: Problem, opts: SearchOptions | None = None, **overrides) -> tuple[tuple[int, ...] | None, SearchResult]:
    """First equilibrium met by the search, or ``None`` after exhausting the tree.

    ``None`` proves non-existence only when ``result.stats.complete`` is set.
    """
    result = solve_all(problem, opts, **{**overrides, "first_only": True})
    point = result.equilibria[0] if result.equilibria else None
    return point, result
