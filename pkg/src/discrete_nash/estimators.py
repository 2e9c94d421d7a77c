"""Estimator-style front ends: configure, ``fit(problem)``, read fitted attributes."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .branching import SearchOptions, solve_all
from .continuous import DEFAULT_MAX_ITER, DEFAULT_ROUND_EPS, DEFAULT_TOL
from .jacobi import SCHEDULES, detect_partition, first_row_partition, jacobi_solve, PartitionError
from .model import IntBox, count_points
from .oracle import DEFAULT_BUDGET
from .shrink import shrink_fixed_point
from .validation import check_problem, check_profiles


class DiscreteNashSolver(BaseEstimator):
    """Compute the whole equilibrium set of an integer game.

    Parameters
    ----------
    improved : bool
        Shrink the box around all equilibria before branching.
    discipline : {"fifo", "lifo"}
        Order in which pending boxes are processed.
    first_only : bool
        Stop at the first equilibrium found.

    Attributes
    ----------
    equilibria_ : ndarray of shape (n_equilibria, n_variables)
    stats_ : SearchStats
    complete_ : bool
        False when the node limit cut the search short.
    """

    def __init__(self, improved=True, discipline="fifo", tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                 round_eps=DEFAULT_ROUND_EPS, max_nodes=None, budget=DEFAULT_BUDGET, first_only=False):
        self.improved = improved
        self.discipline = discipline
        self.tol = tol
        self.max_iter = max_iter
        self.round_eps = round_eps
        self.max_nodes = max_nodes
        self.budget = budget
        self.first_only = first_only

    def fit(self, problem, y=None):
        problem = check_problem(problem)
        opts = SearchOptions(**self.get_params())
        result = solve_all(problem, opts)
        self.problem_ = problem
        self.n_features_in_ = problem.n
        self.equilibria_ = np.array(result.equilibria, dtype=np.int64).reshape(-1, problem.n)
        self.stats_ = result.stats
        self.complete_ = result.stats.complete
        self.bounds_ = result.bounds
        return self

    def predict(self, X):
        """Whether each row of ``X`` is one of the fitted equilibria."""
        check_is_fitted(self)
        X = check_profiles(self.problem_, X)
        if self.equilibria_.shape[0] == 0:
            return np.zeros(X.shape[0], dtype=bool)
        return np.any(np.all(X[:, None, :] == self.equilibria_[None, :, :], axis=2), axis=1)


class BoundShrinker(TransformerMixin, BaseEstimator):
    """Componentwise bounds enclosing every equilibrium.

    ``transform`` projects profiles onto the shrunken box.
    """

    def fit(self, problem, y=None):
        problem = check_problem(problem)
        self.lower_, self.upper_ = shrink_fixed_point(problem)
        total = count_points(problem.box)
        kept = count_points(IntBox(self.lower_, self.upper_))
        self.n_features_in_ = problem.n
        self.points_cut_ = total - kept
        self.pct_cut_ = 100.0 * self.points_cut_ / total
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = np.asarray(X)
        if X.shape[-1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} coordinates, got {X.shape[-1]}")
        return np.clip(X, self.lower_, self.upper_)


class JacobiSolver(BaseEstimator):
    """One equilibrium by monotone best-response dynamics.

    ``partition`` is ``"auto"`` (exact detection, falling back to the
    first-row heuristic), ``"first-row"``, or an explicit ``Partition``.
    """

    def __init__(self, schedule="gauss-seidel", partition="auto", max_steps=None, budget=DEFAULT_BUDGET):
        self.schedule = schedule
        self.partition = partition
        self.max_steps = max_steps
        self.budget = budget

    def fit(self, problem, y=None):
        problem = check_problem(problem)
        if self.schedule not in SCHEDULES:
            raise ValueError(f"schedule must be one of {SCHEDULES}")
        self.partition_valid_ = True
        if self.partition == "auto":
            try:
                part = detect_partition(problem)
            except PartitionError:
                part = first_row_partition(problem)
                self.partition_valid_ = False
        elif self.partition == "first-row":
            part = first_row_partition(problem)
            self.partition_valid_ = part.is_valid_for(problem)
        else:
            part = self.partition
            self.partition_valid_ = part.is_valid_for(problem)
        res = jacobi_solve(problem, part, self.schedule, self.max_steps, self.budget)
        self.n_features_in_ = problem.n
        self.partition_ = part
        self.result_ = res
        self.converged_ = res.converged
        self.equilibrium_ = None if res.point is None else np.array(res.point, dtype=np.int64)
        return self
