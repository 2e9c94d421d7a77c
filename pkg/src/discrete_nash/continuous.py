"""Continuous relaxation over a sub-box, solved as an affine box VI.

A point ``x`` solves the relaxed game on ``[lo, hi]`` iff it is a fixed point
of the natural map ``x = clip(x - F(x), lo, hi)``.  We first try a
semismooth Newton (active-set) iteration, which lands on the exact solution
of the identified face in a handful of linear solves.  If it stalls or
cycles we fall back to projected extragradient, which converges for every
monotone ``F``, and polish its output with the active-set step.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import IntBox, Problem

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 200_000
DEFAULT_ROUND_EPS = 1e-10


@dataclass
class ContinuousSolution:
    x: np.ndarray
    residual: float
    iterations: int
    converged: bool
    method: str = "active-set"


def _bounds(problem: Problem, box: IntBox | None):
    if box is None:
        box = problem.box
    if box.dim != problem.n:
        raise ValueError(f"box has dimension {box.dim}, problem has {problem.n}")
    if box.is_empty():
        raise ValueError("cannot solve over an empty box")
    if not box.is_finite():
        raise ValueError("the relaxation needs a finite box")
    return box.lo, box.hi


def natural_residual(problem: Problem, box: IntBox | None, x) -> float:
    """Sup-norm of ``x - clip(x - F(x))``; zero exactly at VI solutions."""
    lo, hi = _bounds(problem, box)
    gm = problem.matrix
    x = np.asarray(x, dtype=float)
    return _residual(gm.M, gm.bhat, lo, hi, x)


def _residual(M, q, lo, hi, x) -> float:
    return float(np.max(np.abs(x - np.clip(x - (M @ x + q), lo, hi)), initial=0.0))


def _active_set(M, q, lo, hi, x, max_steps, tol):
    """Semismooth Newton on the diagonally scaled natural map.

    Returns ``(x, residual, steps)``; ``x`` is ``None`` on a singular face.
    """
    d = np.diag(M)
    fixed = lo == hi
    seen = set()
    res = _residual(M, q, lo, hi, x)
    for step in range(1, max_steps + 1):
        if res <= tol:
            return x, res, step - 1
        w = x - (M @ x + q) / d
        at_lo = (w <= lo) | fixed
        at_hi = (w >= hi) & ~at_lo
        key = at_lo.tobytes() + at_hi.tobytes()
        if key in seen:
            break
        seen.add(key)
        free = ~(at_lo | at_hi)
        xn = np.where(at_lo, lo, np.where(at_hi, hi, 0.0))
        if free.any():
            bound = ~free
            rhs = -(q[free] + M[np.ix_(free, bound)] @ xn[bound])
            try:
                xn[free] = np.linalg.solve(M[np.ix_(free, free)], rhs)
            except np.linalg.LinAlgError:
                return None, np.inf, step
            if not np.all(np.isfinite(xn)):
                return None, np.inf, step
        x = xn
        res = _residual(M, q, lo, hi, x)
    return x, res, len(seen)


def _extragradient(M, q, lo, hi, x, tol, max_iter):
    norm = np.linalg.norm(M, 2)
    step = 0.9 / norm if norm > 0 else 1.0
    res = _residual(M, q, lo, hi, x)
    it = 0
    while it < max_iter and res > tol:
        y = np.clip(x - step * (M @ x + q), lo, hi)
        x = np.clip(x - step * (M @ y + q), lo, hi)
        it += 1
        if it % 16 == 0:
            res = _residual(M, q, lo, hi, x)
    return x, _residual(M, q, lo, hi, x), it


def solve_continuous(problem: Problem, box: IntBox | None = None, tol: float = DEFAULT_TOL,
                     max_iter: int = DEFAULT_MAX_ITER) -> ContinuousSolution:
    """One solution of the relaxed game restricted to ``box``.

    Non-convergence is reported through ``converged=False`` rather than
    raised; callers decide how to proceed.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = _bounds(problem, box)
    gm = problem.matrix
    M, q = gm.M, gm.bhat
    newton_steps = max(50, 3 * problem.n)

    try:
        start = np.linalg.solve(M, -q)
    except np.linalg.LinAlgError:
        start = 0.5 * (lo + hi)
    start = np.clip(start, lo, hi)

    x, res, steps = _active_set(M, q, lo, hi, start, newton_steps, tol)
    if x is not None and res <= tol:
        return ContinuousSolution(x, res, steps, True, "active-set")

    xe, res_e, it = _extragradient(M, q, lo, hi, start, tol, max_iter)
    xp, res_p, extra = _active_set(M, q, lo, hi, xe, newton_steps, tol)
    if xp is not None and res_p < res_e:
        xe, res_e = xp, res_p
    return ContinuousSolution(xe, res_e, steps + it + extra, res_e <= tol, "extragradient")


def round_near_integers(x, eps: float = DEFAULT_ROUND_EPS) -> tuple[np.ndarray, bool]:
    """Snap coordinates lying within ``eps`` of an integer.

    Returns the snapped vector and whether every coordinate was snapped.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    x = np.array(x, dtype=float)
    nearest = np.round(x)
    close = np.abs(x - nearest) <= eps
    x[close] = nearest[close]
    return x, bool(np.all(close))
