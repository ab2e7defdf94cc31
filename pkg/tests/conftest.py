"""Shared fixtures and brute-force reference implementations.

The reference functions here are deliberately naive (itertools over all
subsets / assignments). They are the ground truth the fast paths are
measured against, so they must stay obviously correct.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from clustercert.space import FiniteMetricSpace, validate_space


def make_space(dist, weights=None) -> FiniteMetricSpace:
    d = np.asarray(dist, dtype=float)
    w = None if weights is None else np.asarray(weights, dtype=float)
    return validate_space(d, w)


def space_from_1d(xs, weights=None) -> FiniteMetricSpace:
    xs = np.asarray(xs, dtype=float)
    d = np.abs(xs[:, None] - xs[None, :])
    return make_space(d, weights)


def brute_max_cluster(space, diam_bound):
    """Heaviest subset with diameter <= diam_bound; lex-smallest on ties."""
    n = space.n
    best, best_w = [], 0.0
    for size in range(1, n + 1):
        for comb in itertools.combinations(range(n), size):
            d = 0.0
            for a, b in itertools.combinations(comb, 2):
                d = max(d, space.dist[a, b])
            if d <= diam_bound:
                wsum = float(space.weights[list(comb)].sum())
                if wsum > best_w + 1e-15:
                    best, best_w = list(comb), wsum
    return best, best_w


def brute_anticlique_mass(space, r, size):
    """Total weight-product mass of `size`-subsets with all pairs > r."""
    total = 0.0
    for comb in itertools.combinations(range(space.n), size):
        if all(space.dist[a, b] > r for a, b in itertools.combinations(comb, 2)):
            total += math.prod(float(space.weights[i]) for i in comb)
    return total


def brute_best_structure(space, k, diam_bound, sep_bound):
    """Best k-family measure by exhausting label assignments."""
    n = space.n
    best = 0.0
    best_assign = None
    for assign in itertools.product(range(k + 1), repeat=n):
        ok = True
        for i in range(n):
            if not ok:
                break
            for j in range(i):
                if assign[i] and assign[i] == assign[j] and space.dist[i, j] > diam_bound:
                    ok = False
                    break
                if (
                    assign[i]
                    and assign[j]
                    and assign[i] != assign[j]
                    and space.dist[i, j] < sep_bound
                ):
                    ok = False
                    break
        if ok:
            m = float(sum(space.weights[i] for i in range(n) if assign[i]))
            if m > best:
                best = m
                best_assign = assign
    return best, best_assign


def brute_sym_poly(values, s):
    return float(sum(math.prod(c) for c in itertools.combinations(values, s)))


@pytest.fixture
def tiny_space():
    # 4 points on a line: two tight pairs far apart.
    return space_from_1d([0.0, 0.5, 10.0, 10.5])


@pytest.fixture
def transversal_space():
    # 3 groups x 2 points, within-group far, cross-group medium.
    from clustercert.generators import gen_adversarial

    return gen_adversarial(3, 2, 1.0, 2.0)
