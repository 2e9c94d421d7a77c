"""Input checks shared by the estimators and the command line."""
from __future__ import annotations

import os

import numpy as np

from .model import Problem, load_problem, read_problem


def check_problem(problem) -> Problem:
    """Accept a ``Problem``, a parsed instance dict, JSON text or a file path."""
    if isinstance(problem, Problem):
        return problem
    if isinstance(problem, dict):
        return load_problem(problem)
    if isinstance(problem, os.PathLike):
        return read_problem(problem)
    if isinstance(problem, (str, bytes)):
        text = problem.decode() if isinstance(problem, bytes) else problem
        if text.lstrip().startswith("{"):
            return load_problem(text)
        return read_problem(text)
    raise TypeError(f"cannot interpret {type(problem).__name__} as a problem instance")


def check_profile(problem: Problem, x, integral: bool = True, inside: bool = True) -> np.ndarray:
    """Validate a single strategy profile and return it as a 1-D array."""
    arr = np.asarray(x, dtype=float).reshape(-1)
    if arr.shape != (problem.n,):
        raise ValueError(f"profile has {arr.shape[0]} coordinates, problem has {problem.n}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("profile contains non-finite values")
    if integral:
        if not np.all(arr == np.round(arr)):
            raise ValueError("profile must be integral")
        arr = arr.astype(np.int64)
    if inside and not problem.box.contains(arr):
        raise ValueError("profile lies outside the feasible box")
    return arr


def check_profiles(problem: Problem, X) -> np.ndarray:
    """2-D version of :func:`check_profile` for batches of integral profiles."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != problem.n:
        raise ValueError(f"expected profiles of shape (m, {problem.n}), got {X.shape}")
    if not np.all(X == np.round(X)):
        raise ValueError("profiles must be integral")
    return X.astype(np.int64)


def parse_point(text: str) -> list[int]:
    """Parse ``"c1,c2,..."`` into integers."""
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(p == "" for p in parts):
        raise ValueError(f"malformed point {text!r}")
    out = []
    for p in parts:
        try:
            value = float(p)
        except ValueError:
            raise ValueError(f"malformed point {text!r}") from None
        if not value.is_integer():
            raise ValueError(f"point coordinates must be integers, got {p!r}")
        out.append(int(value))
    return out
