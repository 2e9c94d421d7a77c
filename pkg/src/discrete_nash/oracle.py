"""Exact integer best responses and equilibrium certification.

Deviations are always measured against a player's *original* box, never
against a search sub-box: a profile that is optimal inside a sub-box can
still be beaten by a move outside it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import IntBox, Problem

DEFAULT_BUDGET = 10**7


class BudgetExceededError(RuntimeError):
    """Exact enumeration would need more evaluations than allowed."""


def tie_tolerance(value: float) -> float:
    """Absolute slack under which two cost values count as equal."""
    return 1e-9 * max(1.0, abs(value))


@dataclass
class BestResponseSet:
    argmins: np.ndarray  # (k, n_nu) int array, lexicographically sorted
    value: float

    def __contains__(self, y) -> bool:
        y = np.asarray(y).reshape(1, -1)
        return bool(np.any(np.all(self.argmins == y, axis=1)))

    def __len__(self) -> int:
        return self.argmins.shape[0]


def _player_box(problem: Problem, nu: int, box: IntBox | None) -> IntBox:
    p = problem.players[nu]
    full = IntBox(p.l, p.u)
    if box is None:
        return full
    if box.dim != p.size:
        raise ValueError(f"player box must have dimension {p.size}")
    return box


def _linear_term(problem: Problem, nu: int, x_others) -> np.ndarray:
    p = problem.players[nu]
    x_others = np.asarray(x_others, dtype=float).reshape(-1)
    if x_others.shape != (problem.n - p.size,):
        raise ValueError(f"x_others must have length {problem.n - p.size}")
    return p.C @ x_others + p.b


def _sorted_unique(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] <= 1:
        return rows
    rows = np.unique(rows, axis=0)
    return rows


def best_response(problem: Problem, nu: int, x_others, box: IntBox | None = None,
                  budget: int = DEFAULT_BUDGET, method: str = "auto") -> BestResponseSet:
    """All integer minimisers of player ``nu``'s cost against ``x_others``.

    ``method`` is ``"auto"`` (closed form for scalar players, lattice
    enumeration with ellipsoid pruning for larger ones) or ``"enumerate"``
    (plain exhaustive scan).
    """
    problem._check_player(nu)
    pbox = _player_box(problem, nu, box)
    if pbox.is_empty():
        raise ValueError("player box is empty")
    if not pbox.is_finite():
        raise ValueError("player box must be finite")
    Q = problem.players[nu].Q
    g = _linear_term(problem, nu, x_others)
    return _best_response(Q, g, pbox.lo.astype(np.int64), pbox.hi.astype(np.int64), budget, method)


def _best_response(Q, g, lo, hi, budget=DEFAULT_BUDGET, method="auto") -> BestResponseSet:
    if method not in ("auto", "enumerate"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        if Q.shape[0] == 1:
            return _scalar_response(float(Q[0, 0]), float(g[0]), int(lo[0]), int(hi[0]))
        S = 0.5 * (Q + Q.T)
        try:
            L = np.linalg.cholesky(S)
        except np.linalg.LinAlgError:
            L = None
        if L is not None:
            return _lattice_response(S, L, g, lo, hi, budget)
    return _enumerated_response(Q, g, lo, hi, budget)


def _scalar_response(q: float, g: float, lo: int, hi: int) -> BestResponseSet:
    t = -g / q
    cands = {min(max(math.floor(t), lo), hi), min(max(math.ceil(t), lo), hi)}
    vals = {c: 0.5 * q * c * c + g * c for c in cands}
    best = min(vals.values())
    keep = sorted(c for c, v in vals.items() if v <= best + tie_tolerance(best))
    return BestResponseSet(np.array(keep, dtype=np.int64).reshape(-1, 1), best)


def _values(Q, g, Y) -> np.ndarray:
    Yf = Y.astype(float)
    return 0.5 * np.einsum("ij,jk,ik->i", Yf, Q, Yf) + Yf @ g


def _enumerated_response(Q, g, lo, hi, budget) -> BestResponseSet:
    total = 1
    for a, b in zip(lo, hi):
        total *= int(b) - int(a) + 1
    if total > budget:
        raise BudgetExceededError(f"best response needs {total} evaluations, budget is {budget}")
    Y = IntBox(lo, hi).as_array()
    vals = _values(Q, g, Y)
    best = float(vals.min())
    keep = Y[vals <= best + tie_tolerance(best)]
    return BestResponseSet(_sorted_unique(keep), best)


def _coordinate_descent(S, g, lo, hi, y):
    """Cheap integer incumbent: exact 1-D moves until none improves."""
    y = y.copy()
    for _ in range(50):
        changed = False
        for k in range(y.shape[0]):
            rest = S[k] @ y - S[k, k] * y[k] + g[k]
            t = -rest / S[k, k]
            best_c, best_v = y[k], 0.5 * S[k, k] * y[k] ** 2 + rest * y[k]
            for c in (math.floor(t), math.ceil(t)):
                c = min(max(c, lo[k]), hi[k])
                v = 0.5 * S[k, k] * c * c + rest * c
                if v < best_v - tie_tolerance(best_v):
                    best_c, best_v = c, v
            if best_c != y[k]:
                y[k] = best_c
                changed = True
        if not changed:
            break
    return y


def _lattice_response(S, L, g, lo, hi, budget) -> BestResponseSet:
    """Enumerate lattice points inside the sublevel ellipsoid of the incumbent.

    With ``S = R' R`` and centre ``c = -S^{-1} g`` the cost is
    ``0.5 * |R (y - c)|^2 + const``; back-substitution over the triangular
    ``R`` bounds each coordinate given the ones already fixed.
    """
    n = S.shape[0]
    R = L.T
    c = -np.linalg.solve(S, g)
    base = -0.5 * float(c @ S @ c)
    y0 = np.clip(np.round(c), lo, hi).astype(np.int64)
    inc = _coordinate_descent(S, g, lo, hi, y0)
    best = float(0.5 * inc @ S @ inc + g @ inc)

    def radius_sq(value):
        r2 = 2.0 * (value + tie_tolerance(value) - base)
        return max(r2, 0.0) * (1 + 1e-9) + 1e-12

    r2 = radius_sq(best)
    found = []
    y = np.zeros(n, dtype=np.int64)
    visited = 0
    diag = np.diag(R)

    def descend(k, partial):
        nonlocal r2, best, visited
        # offset of row k from the coordinates already fixed (j > k)
        shift = R[k, k + 1:] @ (y[k + 1:] - c[k + 1:]) if k + 1 < n else 0.0
        centre = c[k] - shift / diag[k]
        room = r2 - partial
        if room < 0:
            return
        half = math.sqrt(room) / diag[k]
        a = max(int(lo[k]), math.ceil(centre - half))
        b = min(int(hi[k]), math.floor(centre + half))
        for v in range(a, b + 1):
            visited += 1
            if visited > budget:
                raise BudgetExceededError(f"best response exceeded the budget of {budget} nodes")
            term = (diag[k] * (v - centre)) ** 2
            if partial + term > r2:
                continue
            y[k] = v
            if k == 0:
                val = float(0.5 * y @ S @ y + g @ y)
                if val <= best + tie_tolerance(best):
                    found.append((val, y.copy()))
                    if val < best:
                        best = val
                        r2 = radius_sq(best)
            else:
                descend(k - 1, partial + term)

    descend(n - 1, 0.0)
    if not found:
        # the incumbent always lies inside the ellipsoid; guard against roundoff
        found.append((best, inc))
    keep = np.array([row for val, row in found if val <= best + tie_tolerance(best)], dtype=np.int64)
    return BestResponseSet(_sorted_unique(keep), best)


def is_equilibrium(problem: Problem, x, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff no player gains by an integer deviation inside its own box."""
    x = np.asarray(x)
    if x.shape != (problem.n,):
        raise ValueError(f"profile must have length {problem.n}")
    xf = x.astype(float)
    if not np.all(xf == np.round(xf)):
        raise ValueError("profile must be integral")
    if not problem.box.contains(xf):
        raise ValueError("profile lies outside the feasible box")
    for nu, p in enumerate(problem.players):
        own = xf[problem.block(nu)]
        g = p.C @ xf[problem.others(nu)] + p.b
        current = float(0.5 * own @ p.Q @ own + g @ own)
        br = _best_response(p.Q, g, p.l, p.u, budget)
        if current > br.value + tie_tolerance(br.value):
            return False
    return True


def enumerate_equilibria(problem: Problem, box: IntBox | None = None,
                         budget: int = DEFAULT_BUDGET, chunk: int = 4096) -> list[tuple[int, ...]]:
    """Brute-force equilibrium set inside ``box`` (default: whole feasible set).

    Every profile in the box is compared against every unilateral deviation
    in the full strategy set, so this routine does not depend on the best
    response code and serves as an independent check of it.
    """
    if box is None:
        box = problem.box
    box = box.intersect(problem.box)
    total = box.count()
    if total > budget:
        raise BudgetExceededError(f"box holds {total} points, budget is {budget}")
    if total == 0:
        return []
    points = box.as_array()
    ok = np.ones(points.shape[0], dtype=bool)
    for nu, p in enumerate(problem.players):
        blk, oth = problem.block(nu), problem.others(nu)
        devs = IntBox(p.l, p.u).as_array().astype(float)
        quad = 0.5 * np.einsum("ij,jk,ik->i", devs, p.Q, devs)
        for start in range(0, points.shape[0], chunk):
            sl = slice(start, start + chunk)
            P = points[sl].astype(float)
            G = P[:, oth] @ p.C.T + p.b
            own = P[:, blk]
            current = 0.5 * np.einsum("ij,jk,ik->i", own, p.Q, own) + np.einsum("ij,ij->i", G, own)
            best = (quad[None, :] + G @ devs.T).min(axis=1)
            slack = 1e-9 * np.maximum(1.0, np.abs(best))
            ok[sl] &= current <= best + slack
    return [tuple(int(v) for v in row) for row in points[ok]]
