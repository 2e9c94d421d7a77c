"""Variable fixing and complement splitting for the branching search."""
from __future__ import annotations

import numpy as np

from .model import IntBox, Problem


def box_intersect(a: IntBox, b: IntBox) -> IntBox | None:
    """Componentwise intersection, or ``None`` when it holds no point."""
    out = a.intersect(b)
    return None if out.is_empty() else out


def fixing_box(problem: Problem, Y: IntBox, xbar) -> IntBox:
    """Half-space box ``B`` such that ``Y \\ B`` holds no equilibrium.

    ``xbar`` must solve the relaxed game on ``Y`` and be already rounded;
    "at a bound" is tested by exact equality.  For each variable ``k`` whose
    own curvature is positive:

    * if ``xbar_k`` sits at ``lo_k`` and every other variable pushing its
      partial gradient up (``M[k, j] > 0``) is at its lower bound while every
      one pushing it down (``M[k, j] < 0``) is at its upper bound, moving
      ``x_k`` up can never pay off, so ``x_k <= lo_k`` is added;
    * symmetrically at ``hi_k``, adding ``x_k >= hi_k``.
    """
    if not Y.is_finite():
        raise ValueError("fixing needs a finite box")
    M = problem.matrix.M
    lo, hi = Y.lo, Y.hi
    x = np.asarray(xbar, dtype=float)
    n = problem.n
    at_lo = x == lo
    at_hi = x == hi
    B_lo = np.full(n, -np.inf)
    B_hi = np.full(n, np.inf)
    for k in range(n):
        if M[k, k] <= 0:
            continue
        row = M[k].copy()
        row[k] = 0.0
        pos, neg = row > 0, row < 0
        if at_lo[k] and np.all(at_lo[pos]) and np.all(at_hi[neg]):
            B_hi[k] = lo[k]
            continue
        if at_hi[k] and np.all(at_hi[pos]) and np.all(at_lo[neg]):
            B_lo[k] = hi[k]
    return IntBox(B_lo, B_hi)


def complement_boxes(xbar, n: int | None = None) -> list[IntBox]:
    """``2n`` disjoint boxes covering every integer point except ``xbar``.

    Box ``2j`` holds ``x_j >= xbar_j + 1`` and box ``2j + 1`` holds
    ``x_j <= xbar_j - 1``, both with ``x_t = xbar_t`` for ``t < j``.
    """
    x = np.asarray(xbar, dtype=float).reshape(-1)
    if n is None:
        n = x.shape[0]
    if x.shape[0] != n:
        raise ValueError(f"point has length {x.shape[0]}, expected {n}")
    if not np.all(x == np.round(x)):
        raise ValueError("complement boxes need an integral point")
    boxes = []
    lo = np.full(n, -np.inf)
    hi = np.full(n, np.inf)
    for j in range(n):
        up_lo = lo.copy()
        up_lo[j] = x[j] + 1
        boxes.append(IntBox(up_lo, hi))
        down_hi = hi.copy()
        down_hi[j] = x[j] - 1
        boxes.append(IntBox(lo, down_hi))
        lo = lo.copy()
        hi = hi.copy()
        lo[j] = hi[j] = x[j]
    return boxes
