"""Distribution statistics of a space at a given scale.

Two numbers drive every downstream bound:

  alpha_min: the smallest alpha such that the medium-band ordered pair mass
             is at most alpha * mu(X)^2,
  beta_min:  the smallest beta such that the ordered (k+1)-tuple mass with
             all pairwise distances > r is at most beta * mu(X)^{k+1}.

Exact tuple mass comes from a budgeted depth-first enumeration over the
d > r graph; a seeded Monte Carlo estimator covers spaces where the exact
count blows past the budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _parallel
from .errors import BudgetExceeded, InvalidParams
from .kernels import DEFAULT_BUDGET, count_anticliques
from .space import EdgeClass, FiniteMetricSpace, ScaleParams, classify_edge

MC_BLOCK = 100_000


def medium_measure(space: FiniteMetricSpace, params: ScaleParams, tol: float = 0.0) -> float:
    """Mass of unordered pairs in the medium band (r, m*r]."""
    iu = np.triu_indices(space.n, 1)
    d = space.dist[iu]
    mask = (d > params.r + tol) & (d <= params.medium_hi + tol)
    w = space.weights
    return float(np.sum(w[iu[0]] * w[iu[1]] * mask))


def alpha_min(space: FiniteMetricSpace, params: ScaleParams, tol: float = 0.0) -> float:
    """Smallest admissible alpha: twice the medium pair mass over mu(X)^2."""
    mu = space.total_measure
    return 2.0 * medium_measure(space, params, tol) / (mu * mu)


def anticlique_measure_exact(
    space: FiniteMetricSpace,
    params: ScaleParams,
    budget: int = DEFAULT_BUDGET,
    workers: int | None = None,
) -> float:
    """Mass of unordered (k+1)-subsets with all pairwise distances > r.

    The budget is split evenly across root vertices (cap = budget // n per
    root subtree) so that truncation decisions do not depend on the worker
    count; raises BudgetExceeded when any root hits its cap or the total
    node count passes the budget.
    """
    n = space.n
    size = params.k + 1
    if size > n:
        return 0.0
    adj = np.ascontiguousarray(space.dist > params.r, dtype=np.uint8)
    w = np.ascontiguousarray(space.weights, dtype=np.float64)
    per_root = max(1, budget // n)

    parts = _parallel.run_chunked(
        lambda lo, hi: count_anticliques(adj, w, size, lo, hi, per_root), n, workers
    )
    total = 0.0
    nodes = 0
    hit_cap = False
    for totals, counts, capped in parts:
        for t in totals:
            total += float(t)
        nodes += int(counts.sum())
        hit_cap = hit_cap or bool(capped.any())
    if hit_cap or nodes > budget:
        raise BudgetExceeded(nodes)
    return total


def beta_min(
    space: FiniteMetricSpace,
    params: ScaleParams,
    budget: int = DEFAULT_BUDGET,
    workers: int | None = None,
) -> float:
    """Smallest admissible beta: (k+1)! * subset mass / mu(X)^{k+1}."""
    t = anticlique_measure_exact(space, params, budget, workers)
    mu = space.total_measure
    return math.factorial(params.k + 1) * t / mu ** (params.k + 1)


def anticlique_measure_mc(
    space: FiniteMetricSpace, params: ScaleParams, samples: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo estimate of beta_min with its binomial standard error.

    Draws i.i.d. ordered (k+1)-tuples with coordinates proportional to the
    weights; the hit indicator (all pairwise distances > r) has expectation
    exactly beta_min, so the sample mean is unbiased.
    """
    if samples <= 0:
        raise InvalidParams("samples must be positive")
    n = space.n
    size = params.k + 1
    rng = np.random.default_rng(seed)
    p = space.weights / space.total_measure
    hits = 0
    done = 0
    while done < samples:
        block = min(MC_BLOCK, samples - done)
        idx = rng.choice(n, size=(block, size), p=p)
        good = np.ones(block, dtype=bool)
        for a in range(size):
            for b in range(a + 1, size):
                good &= space.dist[idx[:, a], idx[:, b]] > params.r
        hits += int(good.sum())
        done += block
    est = hits / samples
    se = math.sqrt(est * (1.0 - est) / samples)
    return est, se


def sym_poly(values, s: int) -> float:
    """Elementary symmetric polynomial sigma_s of the given values."""
    if s < 0:
        raise InvalidParams("order must be >= 0")
    vals = [float(x) for x in values]
    if s > len(vals):
        return 0.0
    partial = [0.0] * (s + 1)
    partial[0] = 1.0
    for i, y in enumerate(vals):
        for j in range(min(i + 1, s), 0, -1):
            partial[j] += y * partial[j - 1]
    return partial[s]


@dataclass(frozen=True)
class HistBin:
    lo: float
    hi: float
    mass: float
    edge_class: str


def distance_histogram(
    space: FiniteMetricSpace, params: ScaleParams, bins: int = 3, tol: float = 0.0
) -> list[HistBin]:
    """Pair-mass histogram over right-closed bins aligned with edge classes.

    bins <= 3 gives exactly the three class bins; larger values add
    equal-width cuts inside [0, dmax] merged with the class boundaries so
    every bin still lies inside a single class.
    """
    if bins < 1:
        raise InvalidParams("bins must be >= 1")
    n = space.n
    iu = np.triu_indices(n, 1)
    d = space.dist[iu]
    cuts = {params.r + tol, params.medium_hi + tol}
    if bins > 3 and d.size:
        dmax = float(d.max())
        if dmax > 0:
            for j in range(1, bins):
                cuts.add(j * dmax / bins)
    edges = sorted(cuts)
    edges_arr = np.asarray(edges + [np.inf])
    mass = np.zeros(len(edges_arr), dtype=np.float64)
    if d.size:
        idx = np.searchsorted(edges_arr, d, side="left")
        np.add.at(mass, idx, space.weights[iu[0]] * space.weights[iu[1]])
    out = []
    lo = 0.0
    for e, m in zip(edges_arr, mass):
        rep = e if np.isfinite(e) else lo + params.r
        out.append(
            HistBin(lo=float(lo), hi=float(e), mass=float(m), edge_class=classify_edge(rep, params, tol).value)
        )
        lo = float(e)
    return out


@dataclass(frozen=True)
class StatsReport:
    medium_measure: float
    anticlique_measure: float
    alpha_min: float
    beta_min: float
    method: str  # "exact" or "monte_carlo"
    ci_halfwidth: float | None
    histogram: tuple[HistBin, ...]


def compute_stats(
    space: FiniteMetricSpace,
    params: ScaleParams,
    budget: int = DEFAULT_BUDGET,
    mc_samples: int | None = None,
    seed: int | None = None,
    bins: int = 3,
    workers: int | None = None,
    mc_mode: str = "fallback",
) -> StatsReport:
    """Assemble the full stats block.

    mc_mode "fallback" runs the exact count and switches to Monte Carlo only
    on BudgetExceeded (requires mc_samples + seed); "force" skips the exact
    attempt; "never" propagates BudgetExceeded.
    """
    if mc_mode not in ("fallback", "force", "never"):
        raise InvalidParams(f"unknown mc_mode {mc_mode!r}")
    med = medium_measure(space, params)
    mu = space.total_measure
    alpha = 2.0 * med / (mu * mu)
    fact = math.factorial(params.k + 1)

    def _mc() -> StatsReport:
        if mc_samples is None or seed is None:
            raise InvalidParams("Monte Carlo fallback needs mc_samples and seed")
        est, se = anticlique_measure_mc(space, params, mc_samples, seed)
        t_est = est * mu ** (params.k + 1) / fact
        return StatsReport(
            medium_measure=med,
            anticlique_measure=t_est,
            alpha_min=alpha,
            beta_min=est,
            method="monte_carlo",
            ci_halfwidth=1.96 * se,
            histogram=tuple(distance_histogram(space, params, bins)),
        )

    if mc_mode == "force":
        return _mc()
    try:
        t = anticlique_measure_exact(space, params, budget, workers)
    except BudgetExceeded:
        if mc_mode == "fallback" and mc_samples is not None:
            return _mc()
        raise
    return StatsReport(
        medium_measure=med,
        anticlique_measure=t,
        alpha_min=alpha,
        beta_min=fact * t / mu ** (params.k + 1),
        method="exact",
        ci_halfwidth=None,
        histogram=tuple(distance_histogram(space, params, bins)),
    )
