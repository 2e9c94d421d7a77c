"""Gauss-Seidel sweeps that tighten the box around every equilibrium.

The lower sweep raises each coordinate to the smallest integer that a player
would choose even against the most "pull-down" profile still possible; no
equilibrium can sit below it.  The upper sweep is the mirror image.  Running
both against each other's latest output until neither moves yields the
joint bounds used to seed the improved search.
"""
from __future__ import annotations

import math

import numpy as np

from .model import Problem


def _slope_offset(M, q, k, z) -> float:
    """Linear coefficient of the cost along coordinate ``k`` with others at ``z``."""
    return float(M[k] @ z - M[k, k] * z[k] + q[k])


def _line_argmin(a: float, g: float, lo: int, hi: int, direction: str) -> int:
    # d(s) = cost(s + 1) - cost(s) for cost(t) = a t^2 / 2 + g t
    def d(s):
        return a * (s + 0.5) + g

    r = -g / a - 0.5
    if direction == "lower":
        s = min(max(math.ceil(r), lo), hi)
        while s < hi and d(s) < 0:
            s += 1
        while s > lo and d(s - 1) >= 0:
            s -= 1
    elif direction == "upper":
        s = min(max(math.floor(r) + 1, lo), hi)
        while s < hi and d(s) <= 0:
            s += 1
        while s > lo and d(s - 1) > 0:
            s -= 1
    else:
        raise ValueError(f"direction must be 'lower' or 'upper', got {direction!r}")
    return int(s)


def one_dim_argmin(problem: Problem, nu: int, i: int, z, lo: int, hi: int,
                   direction: str = "lower") -> int:
    """Integer line minimiser of player ``nu``'s cost in its ``i``-th variable.

    Other coordinates are held at ``z``.  Flat steps are broken toward
    ``lo`` for the lower sweep and toward ``hi`` for the upper sweep: the
    lower sweep returns ``s`` with ``cost(s-1) > cost(s) <= cost(s+1)`` and
    the upper sweep ``s`` with ``cost(s-1) >= cost(s) < cost(s+1)``.
    """
    if lo > hi:
        raise ValueError("empty search interval")
    k = problem.block(nu).start + i
    if not 0 <= i < problem.players[nu].size:
        raise IndexError(f"player {nu} has no variable {i}")
    gm = problem.matrix
    z = np.asarray(z, dtype=float)
    g = _slope_offset(gm.M, gm.bhat, k, z)
    return _line_argmin(float(gm.M[k, k]), g, int(lo), int(hi), direction)


def _sweep_to_fixed_point(problem: Problem, start, other, direction: str):
    gm = problem.matrix
    M, q = gm.M, gm.bhat
    y = np.array(start, dtype=np.int64)
    other = np.asarray(other, dtype=np.int64)
    sweeps = 0
    while True:
        sweeps += 1
        w = y.copy()
        for k in range(problem.n):
            z = np.where(M[k] <= 0, y, other).astype(float)
            g = _slope_offset(M, q, k, z)
            if direction == "lower":
                y[k] = _line_argmin(float(M[k, k]), g, int(y[k]), int(other[k]), "lower")
            else:
                y[k] = _line_argmin(float(M[k, k]), g, int(other[k]), int(y[k]), "upper")
        if np.array_equal(w, y):
            return y, sweeps


def shrink_lower(problem: Problem, l=None, u=None, return_sweeps: bool = False):
    """Raised lower bounds, valid for every equilibrium inside ``[l, u]``."""
    l = problem.lower if l is None else np.asarray(l)
    u = problem.upper if u is None else np.asarray(u)
    if np.any(l > u):
        raise ValueError("l must not exceed u")
    y, sweeps = _sweep_to_fixed_point(problem, l, u, "lower")
    return (y, sweeps) if return_sweeps else y


def shrink_upper(problem: Problem, l=None, u=None, return_sweeps: bool = False):
    """Lowered upper bounds, valid for every equilibrium inside ``[l, u]``."""
    l = problem.lower if l is None else np.asarray(l)
    u = problem.upper if u is None else np.asarray(u)
    if np.any(l > u):
        raise ValueError("l must not exceed u")
    y, sweeps = _sweep_to_fixed_point(problem, u, l, "upper")
    return (y, sweeps) if return_sweeps else y


def shrink_fixed_point(problem: Problem, l=None, u=None) -> tuple[np.ndarray, np.ndarray]:
    """Alternate both sweeps, each fed the other's latest bounds, until stable."""
    lo = np.array(problem.lower if l is None else l, dtype=np.int64)
    hi = np.array(problem.upper if u is None else u, dtype=np.int64)
    while True:
        new_lo = shrink_lower(problem, lo, hi)
        new_hi = shrink_upper(problem, new_lo, hi)
        if np.array_equal(new_lo, lo) and np.array_equal(new_hi, hi):
            return lo, hi
        lo, hi = new_lo, new_hi
