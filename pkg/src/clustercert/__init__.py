"""Certify cluster structure in finite semimetric spaces.

The library measures how a distance distribution splits into short, medium,
and long edges, extracts a greedy family of well separated clusters, and
bounds the fraction of the total measure that family must cover. Everything
is deterministic for a fixed seed and budget, including under the optional
compiled kernels and thread fan-out.
"""

from .bounds import (
    BoundReport,
    OptSolution,
    case_lower_bounds,
    opt_lower_bound,
    opt_solve_grid,
    opt_solve_numeric,
    phi_value,
    psi,
    psi_value,
)
from .discretize import (
    Discretization,
    best_rational_leq,
    discretize_space,
    epsilon_partition,
    inflated_params,
    lift_structure,
    quotient_space,
    replicate_quotient,
)
from .errors import (
    AsymmetricMatrix,
    BudgetExceeded,
    ClusterCertError,
    DenominatorBoundTooSmall,
    DimensionMismatch,
    EmptySet,
    IndexOutOfRange,
    InvalidParams,
    NegativeDistance,
    NonpositiveWeight,
    NonzeroDiagonal,
    StructureViolation,
    TooLarge,
)
from .generators import gen_adversarial, gen_blobs, gen_model, gen_random
from .greedy import (
    ClusterStructure,
    GreedyDecomposition,
    Stage,
    check_structure,
    greedy_decomposition,
    greedy_structure,
    max_cluster,
    structure_from_decomposition,
)
from .kernels import BACKEND, DEFAULT_BUDGET
from .oracle import OracleResult, TheoremCheck, max_structure_bruteforce, verify_theorem
from .space import (
    EdgeClass,
    FiniteMetricSpace,
    ScaleParams,
    classify_edge,
    diameter,
    dump_space_json,
    load_points_csv,
    load_space_json,
    pairwise_distances,
    points_to_csv_text,
    save_points_csv,
    set_distance,
    space_from_json_dict,
    space_from_points,
    space_to_json_dict,
    validate_space,
)
from .stats import (
    StatsReport,
    alpha_min,
    anticlique_measure_exact,
    anticlique_measure_mc,
    beta_min,
    compute_stats,
    distance_histogram,
    medium_measure,
    sym_poly,
)

__version__ = "0.1.0"

__all__ = [
    "AsymmetricMatrix",
    "BACKEND",
    "BoundReport",
    "BudgetExceeded",
    "ClusterCertError",
    "ClusterStructure",
    "DEFAULT_BUDGET",
    "DenominatorBoundTooSmall",
    "DimensionMismatch",
    "Discretization",
    "EdgeClass",
    "EmptySet",
    "FiniteMetricSpace",
    "GreedyDecomposition",
    "IndexOutOfRange",
    "InvalidParams",
    "NegativeDistance",
    "NonpositiveWeight",
    "NonzeroDiagonal",
    "OptSolution",
    "OracleResult",
    "ScaleParams",
    "Stage",
    "StatsReport",
    "StructureViolation",
    "TheoremCheck",
    "TooLarge",
    "alpha_min",
    "anticlique_measure_exact",
    "anticlique_measure_mc",
    "best_rational_leq",
    "beta_min",
    "case_lower_bounds",
    "check_structure",
    "classify_edge",
    "compute_stats",
    "diameter",
    "discretize_space",
    "distance_histogram",
    "dump_space_json",
    "epsilon_partition",
    "gen_adversarial",
    "gen_blobs",
    "gen_model",
    "gen_random",
    "greedy_decomposition",
    "greedy_structure",
    "inflated_params",
    "lift_structure",
    "load_points_csv",
    "load_space_json",
    "max_cluster",
    "max_structure_bruteforce",
    "medium_measure",
    "opt_lower_bound",
    "opt_solve_grid",
    "opt_solve_numeric",
    "pairwise_distances",
    "phi_value",
    "points_to_csv_text",
    "psi",
    "psi_value",
    "quotient_space",
    "replicate_quotient",
    "save_points_csv",
    "set_distance",
    "space_from_json_dict",
    "space_from_points",
    "space_to_json_dict",
    "structure_from_decomposition",
    "sym_poly",
    "validate_space",
    "verify_theorem",
]
