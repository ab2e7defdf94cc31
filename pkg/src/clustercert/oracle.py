"""Exhaustive reference search and end-to-end coverage verification.

The oracle enumerates every assignment of points to k clusters or "outside",
subject to cluster diameter <= 2r and pairwise cluster separation >= r, and
returns the maximum-measure structure. Cost grows like (k+1)^n, so the
search is fenced to small n; it exists to validate the greedy pipeline and
the coverage bound, not for production inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bounds import psi_value
from .errors import InvalidParams, TooLarge
from .greedy import ClusterStructure, greedy_structure
from .kernels import DEFAULT_BUDGET, best_assignment
from .space import FiniteMetricSpace, ScaleParams
from .stats import alpha_min, beta_min

DEFAULT_LIMIT = 14
MAX_ORACLE_K = 4
_NO_BUDGET = 1 << 62


@dataclass(frozen=True)
class OracleResult:
    structure: ClusterStructure
    measure: float
    assignments_explored: int


def max_structure_bruteforce(
    space: FiniteMetricSpace, params: ScaleParams, limit: int = DEFAULT_LIMIT
) -> OracleResult:
    """Best structure over all (k+1)^n assignments, label symmetry removed.

    Ties resolve to the lexicographically smallest assignment vector, so the
    result is deterministic. Raises TooLarge beyond `limit` points.
    """
    n = space.n
    if n > limit:
        raise TooLarge(n, limit)
    if params.k > MAX_ORACLE_K:
        raise InvalidParams(f"exhaustive search supports k <= {MAX_ORACLE_K}, got {params.k}")
    assign, measure, nodes, _ = best_assignment(
        space.dist, space.weights, params.k, 2.0 * params.r, params.r, _NO_BUDGET
    )
    clusters = tuple(
        tuple(i for i in range(n) if assign[i] == c) for c in range(1, params.k + 1)
    )
    structure = ClusterStructure(clusters=clusters, measure=float(measure))
    return OracleResult(structure=structure, measure=float(measure), assignments_explored=nodes)


@dataclass(frozen=True)
class TheoremCheck:
    alpha: float
    beta: float
    psi: float
    total_measure: float
    oracle_measure: float
    greedy_measure: float
    vacuous: bool
    uniform_weights: bool
    theorem_ok: bool
    greedy_le_oracle: bool
    passed: bool


def verify_theorem(
    space: FiniteMetricSpace,
    params: ScaleParams,
    limit: int = DEFAULT_LIMIT,
    budget: int = DEFAULT_BUDGET,
) -> TheoremCheck:
    """Check the coverage bound end to end on one instance.

    theorem_ok: best structure measure >= Psi(alpha_min, beta_min) * mu(X)
    (vacuously true when Psi <= 0); greedy_le_oracle: the greedy structure
    never beats the exhaustive optimum. The coverage guarantee is stated for
    counting measure, so for non-uniform weights the flags are reported but
    a failure is not necessarily a bug.
    """
    a = alpha_min(space, params)
    b = beta_min(space, params, budget)
    psi = psi_value(a, b, params.k)
    mu = space.total_measure
    oracle = max_structure_bruteforce(space, params, limit)
    grd = greedy_structure(space, params, budget)
    slack = 1e-9 * mu
    vacuous = psi <= 0
    theorem_ok = vacuous or oracle.measure + slack >= psi * mu
    greedy_le_oracle = grd.measure <= oracle.measure + slack
    return TheoremCheck(
        alpha=a,
        beta=b,
        psi=psi,
        total_measure=mu,
        oracle_measure=oracle.measure,
        greedy_measure=grd.measure,
        vacuous=vacuous,
        uniform_weights=space.uniform_weights,
        theorem_ok=theorem_ok,
        greedy_le_oracle=greedy_le_oracle,
        passed=theorem_ok and greedy_le_oracle,
    )
