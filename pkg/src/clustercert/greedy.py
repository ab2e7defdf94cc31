"""Greedy extraction of well-separated clusters.

Each stage finds a maximum-measure subset of the still-active points with
diameter <= 2r (a clique in the d <= 2r graph), then removes that cluster
together with everything strictly closer than r to it. The first k stages,
re-ranked by measure, form the candidate structure whose coverage gets
certified downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, InvalidParams, StructureViolation
from .kernels import DEFAULT_BUDGET, max_weight_clique
from .space import FiniteMetricSpace, ScaleParams, diameter, set_distance


@dataclass(frozen=True)
class Stage:
    core: tuple[int, ...]  # extracted cluster, diameter <= 2r
    zone: tuple[int, ...]  # everything removed with it (strict r-neighborhood)
    exact: bool


@dataclass(frozen=True)
class GreedyDecomposition:
    stages: tuple[Stage, ...]
    exact: bool


@dataclass(frozen=True)
class ClusterStructure:
    clusters: tuple[tuple[int, ...], ...]
    measure: float


def _max_cluster_impl(
    space: FiniteMetricSpace, active: Sequence[int], diam_bound: float, budget: int
) -> tuple[list[int], int, bool]:
    act = sorted(int(i) for i in active)
    if not act:
        raise InvalidParams("active set must be non-empty")
    if len(set(act)) != len(act):
        raise InvalidParams("active set has duplicate indices")
    sub = space.dist[np.ix_(act, act)]
    adj = np.ascontiguousarray(sub <= diam_bound, dtype=np.uint8)
    np.fill_diagonal(adj, 0)
    w = np.ascontiguousarray(space.weights[act], dtype=np.float64)
    clique, _, nodes, exceeded = max_weight_clique(adj, w, budget)
    return [act[i] for i in clique], nodes, exceeded


def max_cluster(
    space: FiniteMetricSpace,
    active: Sequence[int],
    diam_bound: float,
    budget: int = DEFAULT_BUDGET,
) -> list[int]:
    """Maximum-measure subset of `active` with diameter <= diam_bound.

    Ties break to the lexicographically smallest index list. Raises
    BudgetExceeded (carrying the incumbent) when the search is truncated.
    """
    best, nodes, exceeded = _max_cluster_impl(space, active, diam_bound, budget)
    if exceeded:
        raise BudgetExceeded(nodes, best_so_far=best)
    return best


def greedy_decomposition(
    space: FiniteMetricSpace,
    params: ScaleParams,
    budget: int = DEFAULT_BUDGET,
    approx: bool = False,
) -> GreedyDecomposition:
    """Peel off maximum 2r-clusters until no point remains.

    With approx=True a truncated stage keeps its incumbent (or falls back to
    the smallest active singleton if the incumbent is empty) and the stage is
    marked inexact; otherwise BudgetExceeded propagates.
    """
    remaining = list(range(space.n))
    stages: list[Stage] = []
    all_exact = True
    two_r = 2.0 * params.r
    while remaining:
        core, nodes, exceeded = _max_cluster_impl(space, remaining, two_r, budget)
        if exceeded:
            if not approx:
                raise BudgetExceeded(nodes, best_so_far=core)
            all_exact = False
            if not core:
                core = [remaining[0]]
        rem_arr = np.asarray(remaining)
        near = space.dist[np.ix_(rem_arr, core)].min(axis=1) < params.r
        zone = [int(x) for x in rem_arr[near]]
        stages.append(Stage(core=tuple(core), zone=tuple(zone), exact=not exceeded))
        remaining = [int(x) for x in rem_arr[~near]]
    return GreedyDecomposition(stages=tuple(stages), exact=all_exact)


def structure_from_decomposition(
    space: FiniteMetricSpace,
    decomp: GreedyDecomposition,
    k: int,
    first_k: bool = False,
) -> ClusterStructure:
    """Pick k stage clusters: heaviest-k by default, literal first k on request.

    Selected clusters keep stage order; missing slots are padded with empty
    clusters so the structure always has exactly k entries.
    """
    if k < 1:
        raise InvalidParams("k must be >= 1")
    measures = [float(space.weights[list(st.core)].sum()) for st in decomp.stages]
    if first_k:
        chosen = list(range(min(k, len(decomp.stages))))
    else:
        ranked = sorted(range(len(decomp.stages)), key=lambda i: (-measures[i], i))
        chosen = sorted(ranked[:k])
    clusters = [decomp.stages[i].core for i in chosen]
    total = sum(measures[i] for i in chosen)
    while len(clusters) < k:
        clusters.append(())
    return ClusterStructure(clusters=tuple(clusters), measure=float(total))


def greedy_structure(
    space: FiniteMetricSpace,
    params: ScaleParams,
    budget: int = DEFAULT_BUDGET,
    approx: bool = False,
    first_k: bool = False,
) -> ClusterStructure:
    decomp = greedy_decomposition(space, params, budget, approx)
    return structure_from_decomposition(space, decomp, params.k, first_k)


def check_structure(
    space: FiniteMetricSpace,
    clusters: Iterable[Iterable[int]],
    diam_bound: float,
    separation: float,
    tol: float = 0.0,
) -> None:
    """Raise StructureViolation unless clusters are disjoint, each of
    diameter <= diam_bound, and pairwise set distance >= separation."""
    cl = [sorted(int(x) for x in c) for c in clusters]
    seen: set[int] = set()
    for i, c in enumerate(cl):
        if seen.intersection(c):
            raise StructureViolation(f"cluster {i} overlaps an earlier cluster")
        seen.update(c)
        d = diameter(space, c)
        if d > diam_bound + tol:
            raise StructureViolation(f"cluster {i} has diameter {d} > {diam_bound}")
    for i in range(len(cl)):
        for j in range(i + 1, len(cl)):
            if not cl[i] or not cl[j]:
                continue
            s = set_distance(space, cl[i], cl[j])
            if s < separation - tol:
                raise StructureViolation(
                    f"clusters {i} and {j} at distance {s} < separation {separation}"
                )
