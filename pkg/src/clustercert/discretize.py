"""Epsilon-coarsening: cover a space by small cells and certify on the quotient.

The quotient keeps one point per cell, with set distance between cells and a
rational weight q_i chosen in [(1-eps) mu(A_i), mu(A_i)]. Structure found on
the quotient lifts back with cluster diameter at most 2r + 2 eps and
separation still >= r, and the distribution parameters inflate in a
controlled way:

    alpha_eps = (alpha_min + boundary band mass) / (1 - eps)^2
    beta_eps  = beta_min / (1 - eps)^(k+1)

where the boundary band collects ordered pairs with m*r < d <= m*r + 2 eps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import DenominatorBoundTooSmall, InvalidParams
from .greedy import ClusterStructure, check_structure
from .kernels import DEFAULT_BUDGET
from .space import FiniteMetricSpace, ScaleParams, validate_space
from .stats import alpha_min, beta_min

DEFAULT_DENOMINATOR_BOUND = 10**6


def epsilon_partition(space: FiniteMetricSpace, epsilon: float) -> list[list[int]]:
    """Partition into cells of diameter <= epsilon.

    Farthest-point traversal from index 0 picks centers until every point is
    within epsilon/2 of one; each point joins its nearest center (ties to
    the smallest center index). For semimetric inputs the epsilon/2 cover
    does not imply cell diameter <= epsilon, so oversized cells are split
    greedily on their farthest pair. Cells are sorted by smallest member.
    """
    if not (epsilon > 0):
        raise InvalidParams("epsilon must be positive")
    d = space.dist
    n = space.n
    centers = [0]
    nearest = d[0].copy()
    while True:
        far = int(np.argmax(nearest))
        if nearest[far] <= epsilon / 2.0:
            break
        centers.append(far)
        nearest = np.minimum(nearest, d[far])
    centers.sort()
    choice = np.argmin(d[:, centers], axis=1)
    raw = [np.nonzero(choice == ci)[0].tolist() for ci in range(len(centers))]

    def split(cell: list[int]) -> list[list[int]]:
        if len(cell) <= 1:
            return [cell]
        sub = d[np.ix_(cell, cell)]
        if float(sub.max()) <= epsilon:
            return [cell]
        a, b = np.unravel_index(int(np.argmax(sub)), sub.shape)
        left = [p for i, p in enumerate(cell) if sub[i, a] <= sub[i, b]]
        right = [p for i, p in enumerate(cell) if sub[i, a] > sub[i, b]]
        return split(left) + split(right)

    cells: list[list[int]] = []
    for cell in raw:
        if cell:
            cells.extend(split(cell))
    cells.sort(key=lambda c: c[0])
    return cells


def _check_partition(space: FiniteMetricSpace, partition) -> list[list[int]]:
    cells = [sorted(int(x) for x in cell) for cell in partition]
    flat = [x for cell in cells for x in cell]
    if sorted(flat) != list(range(space.n)) or any(not cell for cell in cells):
        raise InvalidParams("not a partition of the space into non-empty cells")
    return cells


def best_rational_leq(x: Fraction, max_den: int) -> Fraction:
    """Largest fraction <= x with denominator <= max_den (continued fractions)."""
    if max_den < 1:
        raise InvalidParams("denominator bound must be >= 1")
    if x.denominator <= max_den:
        return x
    p0, q0 = 0, 1
    p1, q1 = 1, 0
    num, den = x.numerator, x.denominator
    while den:
        a = num // den
        p2, q2 = a * p1 + p0, a * q1 + q0
        if q2 > max_den:
            break
        p0, q0, p1, q1 = p1, q1, p2, q2
        num, den = den, num - a * den
    else:
        return Fraction(p1, q1)
    # last convergent within the bound, and the extremal semiconvergent on
    # the other side of x; the admissible one of the two is the answer
    t = (max_den - q0) // q1
    cands = [Fraction(p1, q1), Fraction(t * p1 + p0, t * q1 + q0)]
    below = [f for f in cands if f <= x]
    return max(below)


def quotient_space(
    space: FiniteMetricSpace,
    partition,
    epsilon: float,
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND,
) -> tuple[FiniteMetricSpace, tuple[Fraction, ...]]:
    """One point per cell, set distances between cells, rational weights.

    q_i is the largest rational with denominator <= denominator_bound that
    does not exceed mu(A_i); raises DenominatorBoundTooSmall (naming the
    cell) if it falls below (1 - eps) mu(A_i).
    """
    if not (0 < epsilon < 1):
        raise InvalidParams("epsilon must lie in (0, 1)")
    cells = _check_partition(space, partition)
    m = len(cells)
    q: list[Fraction] = []
    one_minus = 1 - Fraction(epsilon)
    for ci, cell in enumerate(cells):
        mass = Fraction(float(space.weights[cell].sum()))
        cand = best_rational_leq(mass, denominator_bound)
        if cand < one_minus * mass:
            raise DenominatorBoundTooSmall(ci, denominator_bound)
        q.append(cand)
    dist = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            v = float(space.dist[np.ix_(cells[i], cells[j])].min())
            dist[i, j] = v
            dist[j, i] = v
    quotient = validate_space(dist, [float(x) for x in q])
    return quotient, tuple(q)


def inflated_params(
    space: FiniteMetricSpace,
    partition,
    params: ScaleParams,
    epsilon: float,
    budget: int = DEFAULT_BUDGET,
) -> tuple[float, float]:
    """(alpha_eps, beta_eps) guaranteed to dominate the quotient's parameters."""
    if not (0 < epsilon < 1):
        raise InvalidParams("epsilon must lie in (0, 1)")
    _check_partition(space, partition)
    iu = np.triu_indices(space.n, 1)
    d = space.dist[iu]
    hi = params.medium_hi
    band = (d > hi) & (d <= hi + 2.0 * epsilon)
    w = space.weights
    mu = space.total_measure
    band_mass = 2.0 * float(np.sum(w[iu[0]] * w[iu[1]] * band)) / (mu * mu)
    a = alpha_min(space, params)
    b = beta_min(space, params, budget)
    shrink = 1.0 - epsilon
    return (a + band_mass) / (shrink * shrink), b / shrink ** (params.k + 1)


@dataclass(frozen=True)
class Discretization:
    partition: tuple[tuple[int, ...], ...]
    quotient: FiniteMetricSpace
    q: tuple[Fraction, ...]
    epsilon: float
    alpha_eps: float
    beta_eps: float


def discretize_space(
    space: FiniteMetricSpace,
    params: ScaleParams,
    epsilon: float,
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND,
    budget: int = DEFAULT_BUDGET,
) -> Discretization:
    """Full coarsening pipeline: partition, quotient, inflated parameters."""
    partition = epsilon_partition(space, epsilon)
    quotient, q = quotient_space(space, partition, epsilon, denominator_bound)
    a_eps, b_eps = inflated_params(space, partition, params, epsilon, budget)
    return Discretization(
        partition=tuple(tuple(c) for c in partition),
        quotient=quotient,
        q=q,
        epsilon=epsilon,
        alpha_eps=a_eps,
        beta_eps=b_eps,
    )


def lift_structure(
    space: FiniteMetricSpace,
    partition,
    structure: ClusterStructure,
    params: ScaleParams,
    epsilon: float,
) -> ClusterStructure:
    """Expand a quotient structure back to original indices and revalidate.

    Lifted clusters have diameter <= 2r + 2 eps and separation >= r; the
    measure uses the original weights (never below the rational quotient
    measure).
    """
    cells = _check_partition(space, partition)
    clusters = []
    for cl in structure.clusters:
        members: list[int] = []
        for ci in cl:
            if not 0 <= int(ci) < len(cells):
                raise InvalidParams(f"cell index {ci} out of range")
            members.extend(cells[int(ci)])
        clusters.append(tuple(sorted(members)))
    scale = max(params.r, float(space.dist.max(initial=0.0)))
    check_structure(
        space,
        clusters,
        diam_bound=2.0 * params.r + 2.0 * epsilon,
        separation=params.r,
        tol=1e-9 * scale,
    )
    measure = float(sum(space.weights[list(c)].sum() for c in clusters if c))
    return ClusterStructure(clusters=tuple(clusters), measure=measure)


def replicate_quotient(
    quotient: FiniteMetricSpace,
    q: tuple[Fraction, ...],
    max_points: int = 2000,
) -> tuple[FiniteMetricSpace, list[int]]:
    """Uniform-weight model of the rational quotient: cell i becomes
    q_i * L copies at mutual distance 0, L the common denominator."""
    if len(q) != quotient.n:
        raise InvalidParams("one rational weight per quotient point required")
    scale = lcm(*(f.denominator for f in q)) if q else 1
    counts = [int(f * scale) for f in q]
    total = sum(counts)
    if total > max_points:
        raise InvalidParams(
            f"replication needs {total} points (> {max_points}); lower the denominator bound"
        )
    reps = np.repeat(np.arange(quotient.n), counts)
    dist = quotient.dist[np.ix_(reps, reps)].copy()
    np.fill_diagonal(dist, 0.0)
    return validate_space(dist), counts
