"""Exact combinatorics of (multi)magic-square coefficient systems."""

from .counting import (
    CountReport,
    DiagonalSystem,
    Filter,
    collision_identity_check,
    count_solutions,
    enumerate_solutions,
    expected_exponent,
    exponent_fit,
    smooth_filter,
)
from .domination import (
    ThresholdFunction,
    Verdict,
    check_rank_condition,
    dominates,
    eval_F,
    piecewise_equivalence,
)
from .exactlinalg import IntMatrix, ScanConfig, rank, rank_profile, submatrix
from .magicsys import (
    MagicSystem,
    Square,
    best_known_order,
    column_vector,
    diagonal_sets,
    kth_power_threshold,
    magic_matrix,
    merge_columns,
    multimagic_threshold,
)
from .partition import BasisPartition, find_basis_partition, largest_partitionable, verify_partition
from .solubility import (
    padic_nonsingular_solution,
    real_nonsingular_solution,
    solubility_report,
)
from .squares import brute_force_squares, verify_square

__version__ = "0.1.0"
