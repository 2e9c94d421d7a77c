"""Equilibria of Nash games with integer box strategies and quadratic costs."""
from .bench import generate, generate_two_groups
from .branching import SearchOptions, SearchResult, SearchStats, select_branch_index, solve_all, solve_all_improved, solve_one
from .continuous import ContinuousSolution, natural_residual, round_near_integers, solve_continuous
from .datasets import load_example
from .estimators import BoundShrinker, DiscreteNashSolver, JacobiSolver
from .jacobi import (Partition, PartitionError, JacobiResult, detect_partition, first_row_partition,
                     jacobi_solve, step_bound)
from .model import (GameMatrix, IntBox, PlayerData, Problem, ProblemError, assemble_matrix, count_points,
                    dump_problem, eval_F, load_problem, make_problem, problem_to_dict, read_problem, theta,
                    write_problem)
from .oracle import BestResponseSet, BudgetExceededError, best_response, enumerate_equilibria, is_equilibrium
from .pruning import box_intersect, complement_boxes, fixing_box
from .shrink import one_dim_argmin, shrink_fixed_point, shrink_lower, shrink_upper

__version__ = "0.1.0"
