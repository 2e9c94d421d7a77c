"""Problem data for integer Nash games with quadratic costs on boxes.

Player ``nu`` minimises::

    theta_nu(x) = 0.5 * x_nu' Q_nu x_nu + (C_nu x_{-nu} + b_nu)' x_nu

over the integer points of ``[l_nu, u_nu]``.  ``x_{-nu}`` stacks the other
players' blocks in ascending player order, which fixes the column order of
``C_nu``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

import numpy as np


class ProblemError(ValueError):
    """Raised when an instance violates the data invariants."""


@dataclass(frozen=True, eq=False)
class PlayerData:
    Q: np.ndarray
    C: np.ndarray
    b: np.ndarray
    l: np.ndarray
    u: np.ndarray

    @property
    def size(self) -> int:
        return self.b.shape[0]


def _as_int_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ProblemError(f"{name} must be finite (unbounded boxes are not supported)")
    if not np.all(arr == np.round(arr)):
        raise ProblemError(f"{name} must contain integers, got {arr.tolist()}")
    return arr.astype(np.int64)


def _as_matrix(values, rows: int, cols: int, name: str) -> np.ndarray:
    if cols == 0 and (values is None or len(values) == 0 or all(len(r) == 0 for r in values)):
        return np.zeros((rows, 0))
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ProblemError(f"{name} is not a rectangular numeric matrix") from exc
    if arr.shape != (rows, cols):
        raise ProblemError(f"{name} has shape {arr.shape}, expected {(rows, cols)}")
    if not np.all(np.isfinite(arr)):
        raise ProblemError(f"{name} contains non-finite entries")
    return arr


class Problem:
    """An N-player game with stacked strategy vector of length ``n``.

    Instances are treated as immutable once built.
    """

    def __init__(self, players: Sequence[PlayerData]):
        players = list(players)
        if not players:
            raise ProblemError("a problem needs at least one player")
        sizes = [p.size for p in players]
        if min(sizes) < 1:
            raise ProblemError("every player controls at least one variable")
        n = int(sum(sizes))
        for k, p in enumerate(players):
            nk = p.size
            if p.Q.shape != (nk, nk):
                raise ProblemError(f"player {k}: Q has shape {p.Q.shape}, expected {(nk, nk)}")
            if p.C.shape != (nk, n - nk):
                raise ProblemError(f"player {k}: C has shape {p.C.shape}, expected {(nk, n - nk)}")
            if p.l.shape != (nk,) or p.u.shape != (nk,):
                raise ProblemError(f"player {k}: bounds must have length {nk}")
            if np.any(p.l > p.u):
                raise ProblemError(f"player {k}: empty box, l > u somewhere")
            if np.any(np.diag(p.Q) <= 0):
                raise ProblemError(f"player {k}: Q needs a strictly positive diagonal")
        self.players = tuple(players)
        self.n = n
        self.offsets = tuple(int(v) for v in np.concatenate([[0], np.cumsum(sizes)[:-1]]))

    @property
    def n_players(self) -> int:
        return len(self.players)

    def block(self, nu: int) -> slice:
        self._check_player(nu)
        start = self.offsets[nu]
        return slice(start, start + self.players[nu].size)

    def others(self, nu: int) -> np.ndarray:
        """Global indices of ``x_{-nu}`` in the order used by ``C_nu``."""
        blk = self.block(nu)
        idx = np.arange(self.n)
        return np.concatenate([idx[: blk.start], idx[blk.stop:]])

    def _check_player(self, nu: int) -> None:
        if not 0 <= nu < len(self.players):
            raise IndexError(f"player index {nu} out of range for {len(self.players)} players")

    @cached_property
    def lower(self) -> np.ndarray:
        return np.concatenate([p.l for p in self.players])

    @cached_property
    def upper(self) -> np.ndarray:
        return np.concatenate([p.u for p in self.players])

    @cached_property
    def box(self) -> "IntBox":
        return IntBox(self.lower, self.upper)

    @cached_property
    def matrix(self) -> "GameMatrix":
        return assemble_matrix(self)

    @cached_property
    def owner(self) -> np.ndarray:
        """Player index owning each global variable."""
        return np.repeat(np.arange(len(self.players)), [p.size for p in self.players])

    def __repr__(self) -> str:
        sizes = [p.size for p in self.players]
        return f"Problem(players={len(self.players)}, sizes={sizes}, n={self.n})"


@dataclass(frozen=True, eq=False)
class GameMatrix:
    """``F(x) = M @ x + bhat``; the Jacobian of F is the constant ``M``."""

    M: np.ndarray
    bhat: np.ndarray

    @cached_property
    def symmetric_part(self) -> np.ndarray:
        return 0.5 * (self.M + self.M.T)


def assemble_matrix(problem: Problem) -> GameMatrix:
    n = problem.n
    M = np.zeros((n, n))
    for nu, p in enumerate(problem.players):
        blk = problem.block(nu)
        # own-block curvature enters the gradient symmetrised
        M[blk, blk] = 0.5 * (p.Q + p.Q.T)
        M[blk, problem.others(nu)] = p.C
    bhat = np.concatenate([p.b for p in problem.players]).astype(float)
    M.setflags(write=False)
    bhat.setflags(write=False)
    return GameMatrix(M, bhat)


def theta(problem: Problem, nu: int, x) -> float:
    """Cost of player ``nu`` at profile ``x``."""
    problem._check_player(nu)
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.n,):
        raise ValueError(f"profile must have length {problem.n}")
    p = problem.players[nu]
    own = x[problem.block(nu)]
    lin = p.C @ x[problem.others(nu)] + p.b
    return float(0.5 * own @ p.Q @ own + lin @ own)


def eval_F(problem: Problem, x) -> np.ndarray:
    """Stacked partial gradients ``grad_{x_nu} theta_nu``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.n,):
        raise ValueError(f"profile must have length {problem.n}")
    gm = problem.matrix
    return gm.M @ x + gm.bhat


class IntBox:
    """Product of integer intervals ``[lo_i, hi_i]``; sides may be infinite.

    Bounds are kept as float arrays so that ``-inf``/``inf`` are representable;
    every finite bound is an exact integer.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = np.array(lo, dtype=float).reshape(-1)
        hi = np.array(hi, dtype=float).reshape(-1)
        if lo.shape != hi.shape:
            raise ValueError("lo and hi must have the same length")
        for arr in (lo, hi):
            fin = np.isfinite(arr)
            if np.any(np.isnan(arr)) or np.any(arr[fin] != np.round(arr[fin])):
                raise ValueError("box bounds must be integers or infinite")
        lo.setflags(write=False)
        hi.setflags(write=False)
        self.lo = lo
        self.hi = hi

    @classmethod
    def full(cls, n: int) -> "IntBox":
        return cls(np.full(n, -np.inf), np.full(n, np.inf))

    @property
    def dim(self) -> int:
        return self.lo.shape[0]

    def is_empty(self) -> bool:
        return bool(np.any(self.lo > self.hi))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.lo)) and np.all(np.isfinite(self.hi)))

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(self.lo <= x) and np.all(x <= self.hi))

    def intersect(self, other: "IntBox") -> "IntBox":
        return IntBox(np.maximum(self.lo, other.lo), np.minimum(self.hi, other.hi))

    def with_bounds(self, i: int, lo=None, hi=None) -> "IntBox":
        new_lo, new_hi = self.lo.copy(), self.hi.copy()
        if lo is not None:
            new_lo[i] = max(new_lo[i], lo)
        if hi is not None:
            new_hi[i] = min(new_hi[i], hi)
        return IntBox(new_lo, new_hi)

    def count(self) -> int:
        return count_points(self)

    def points(self) -> Iterator[tuple[int, ...]]:
        """Integer points in lexicographic order."""
        if not self.is_finite():
            raise ValueError("cannot enumerate an unbounded box")
        if self.is_empty():
            return iter(())
        ranges = [range(int(a), int(b) + 1) for a, b in zip(self.lo, self.hi)]
        return product(*ranges)

    def as_array(self) -> np.ndarray:
        """All integer points as a ``(count, dim)`` int array, lexicographic."""
        if not self.is_finite():
            raise ValueError("cannot enumerate an unbounded box")
        if self.is_empty():
            return np.zeros((0, self.dim), dtype=np.int64)
        axes = [np.arange(int(a), int(b) + 1, dtype=np.int64) for a, b in zip(self.lo, self.hi)]
        grid = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.reshape(-1) for g in grid], axis=1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntBox):
            return NotImplemented
        if self.is_empty() and other.is_empty():
            return self.dim == other.dim
        return bool(np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi))

    def __hash__(self):
        return hash((self.lo.tobytes(), self.hi.tobytes()))

    def __repr__(self) -> str:
        def fmt(v):
            return str(int(v)) if math.isfinite(v) else ("-inf" if v < 0 else "inf")

        sides = ", ".join(f"[{fmt(a)},{fmt(b)}]" for a, b in zip(self.lo, self.hi))
        return f"IntBox({sides})"


def count_points(box: IntBox) -> int:
    """Number of integer points, as an exact Python int."""
    if box.is_empty():
        return 0
    if not box.is_finite():
        raise ValueError("an unbounded box has infinitely many points")
    total = 1
    for a, b in zip(box.lo, box.hi):
        total *= int(b) - int(a) + 1
    return total


# --- instance files -------------------------------------------------------

def problem_from_dict(document: dict) -> Problem:
    if not isinstance(document, dict) or "players" not in document:
        raise ProblemError('instance document needs a "players" list')
    raw = document["players"]
    if not isinstance(raw, list) or not raw:
        raise ProblemError("a problem needs at least one player")
    sizes = []
    for k, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ProblemError(f"player {k} must be an object")
        missing = {"Q", "b", "l", "u"} - entry.keys()
        if missing:
            raise ProblemError(f"player {k} is missing keys {sorted(missing)}")
        sizes.append(len(entry["b"]))
    n = sum(sizes)
    players = []
    for k, (entry, nk) in enumerate(zip(raw, sizes)):
        if nk < 1:
            raise ProblemError(f"player {k}: b is empty")
        for key in ("l", "u"):
            if any(v is None for v in entry[key]):
                raise ProblemError(f"player {k}: {key} has a missing (unbounded) side")
            if len(entry[key]) != nk:
                raise ProblemError(f"player {k}: {key} has length {len(entry[key])}, expected {nk}")
        b = np.asarray(entry["b"], dtype=float)
        if not np.all(np.isfinite(b)):
            raise ProblemError(f"player {k}: b contains non-finite entries")
        players.append(PlayerData(
            Q=_as_matrix(entry["Q"], nk, nk, f"player {k}: Q"),
            C=_as_matrix(entry.get("C", []), nk, n - nk, f"player {k}: C"),
            b=b,
            l=_as_int_vector(entry["l"], f"player {k}: l"),
            u=_as_int_vector(entry["u"], f"player {k}: u"),
        ))
    return Problem(players)


def load_problem(document) -> Problem:
    """Build a problem from JSON text, bytes or an already parsed dict."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ProblemError(f"instance is not valid JSON: {exc}") from exc
    return problem_from_dict(document)


def read_problem(path) -> Problem:
    with open(path, encoding="utf-8") as fh:
        return load_problem(fh.read())


def _plain(v):
    v = float(v)
    return int(v) if v.is_integer() and abs(v) < 2**53 else v


def problem_to_dict(problem: Problem) -> dict:
    players = []
    for p in problem.players:
        players.append({
            "Q": [[_plain(v) for v in row] for row in p.Q],
            "C": [[_plain(v) for v in row] for row in p.C],
            "b": [_plain(v) for v in p.b],
            "l": [int(v) for v in p.l],
            "u": [int(v) for v in p.u],
        })
    return {"players": players}


def dump_problem(problem: Problem) -> str:
    return json.dumps(problem_to_dict(problem), indent=1)


def write_problem(problem: Problem, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_problem(problem))
        fh.write("\n")


def make_problem(blocks) -> Problem:
    """Convenience constructor from ``(Q, C, b, l, u)`` tuples."""
    players = []
    sizes = [len(np.atleast_1d(blk[2])) for blk in blocks]
    n = sum(sizes)
    for k, ((Q, C, b, l, u), nk) in enumerate(zip(blocks, sizes)):
        players.append(PlayerData(
            Q=_as_matrix(np.atleast_2d(Q), nk, nk, f"player {k}: Q"),
            C=_as_matrix(np.zeros((nk, 0)) if n == nk else np.atleast_2d(C), nk, n - nk, f"player {k}: C"),
            b=np.atleast_1d(np.asarray(b, dtype=float)),
            l=_as_int_vector(l, f"player {k}: l"),
            u=_as_int_vector(u, f"player {k}: u"),
        ))
    return Problem(players)
