"""Coverage lower bounds and the sorted-simplex optimization behind them.

psi(alpha, beta, k) bounds the fraction of total measure covered by the best
k-cluster structure:

    Psi = 1 - sqrt(alpha) * (2k + 1) - (k(e + 1) + 1) * beta^(1/(k+1))

phi(beta, k) = 1 - (k+1) beta^(1/(k+1)) bounds the mass claimed by the first
k greedy stages. Both collapse to vacuous (<= 0) on noisy inputs; callers
treat that as "nothing certified", never as failure.

The optimization: minimize the top-k sum of a sorted non-negative vector w
with sum(w) = 1 subject to sigma_{k+1}(w) <= c. Exchange arguments reduce
optima to vectors (w1, lambda x s, mu, 0, ...) with w1 >= lambda >= mu, so
the numeric solver sweeps (s, lambda) and maximizes mu analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import InvalidParams
from .stats import sym_poly


def _check_ab(alpha: float, beta: float, k: int) -> None:
    if not isinstance(k, int) or k < 2:
        raise InvalidParams(f"k must be an integer >= 2, got {k!r}")
    if not (alpha >= 0 and math.isfinite(alpha)):
        raise InvalidParams(f"alpha must be >= 0, got {alpha!r}")
    if not (beta >= 0 and math.isfinite(beta)):
        raise InvalidParams(f"beta must be >= 0, got {beta!r}")


def psi_value(alpha: float, beta: float, k: int) -> float:
    """Coverage lower-bound coefficient; may be <= 0 (vacuous)."""
    _check_ab(alpha, beta, k)
    return 1.0 - math.sqrt(alpha) * (2 * k + 1) - (k * (math.e + 1.0) + 1.0) * beta ** (1.0 / (k + 1))


def phi_value(beta: float, k: int) -> float:
    """Greedy-stage mass lower-bound coefficient."""
    _check_ab(0.0, beta, k)
    return 1.0 - (k + 1) * beta ** (1.0 / (k + 1))


@dataclass(frozen=True)
class BoundReport:
    alpha: float
    beta: float
    k: int
    psi: float
    phi: float
    vacuous: bool
    alpha_source: str
    beta_source: str


def psi(
    alpha: float,
    beta: float,
    k: int,
    alpha_source: str = "computed",
    beta_source: str = "computed",
) -> BoundReport:
    p = psi_value(alpha, beta, k)
    return BoundReport(
        alpha=alpha,
        beta=beta,
        k=k,
        psi=p,
        phi=phi_value(beta, k),
        vacuous=p <= 0,
        alpha_source=alpha_source,
        beta_source=beta_source,
    )


def opt_lower_bound(c: float, k: int) -> tuple[float, bool]:
    """Closed-form objective bound 1 - (k+1) c^(1/(k+1)) and its validity.

    The bound is only a theorem when (k+1) c^(1/(k+1)) <= 1; the flag says
    whether that hypothesis holds.
    """
    _check_ab(0.0, c, k)
    penalty = (k + 1) * c ** (1.0 / (k + 1))
    return 1.0 - penalty, penalty <= 1.0


def case_lower_bounds(k: int, c: float) -> dict[str, float]:
    """Per-shape-class objective bounds from the case analysis.

    Keys name the support shape: s = k-1, s = k, s >= k+1. The last one is
    the global bound whenever it dominates, which holds on the validity
    region of opt_lower_bound but fails for k = 2 once c > 27/64.
    """
    _check_ab(0.0, c, k)
    root_k = (c * (k + 1)) ** (1.0 / k)
    return {
        "s_eq_k_minus_1": 1.0 - root_k,
        "s_eq_k": 1.0 - 2.0 * root_k,
        "s_ge_k_plus_1": 1.0 - (k + 1) * c ** (1.0 / (k + 1)),
    }


@dataclass(frozen=True)
class OptSolution:
    n: int
    k: int
    c: float
    objective: float
    shape: str  # "uniform" or "structured"
    w: tuple[float, ...]
    sigma: float
    s: int | None
    lam: float | None
    mu: float | None


def _structured_best_mu(s: int, lam: float, c: float, k: int, n: int) -> float | None:
    """Largest feasible mu for the vector (w1, lam x s, mu) of length <= n."""
    c1 = comb(s, k - 1)
    c2 = comb(s, k)
    c3 = comb(s, k + 1)
    base = (1.0 - s * lam) * c2 * lam**k + c3 * lam ** (k + 1)
    if base > c:
        return None
    mu_cap = min(lam, 1.0 - (s + 1) * lam)
    if s + 2 > n:
        mu_cap = 0.0
    if mu_cap <= 0:
        return 0.0
    a = c1 * lam ** (k - 1)
    if a <= 0:
        return mu_cap
    top = 1.0 - s * lam
    if a * mu_cap * (top - mu_cap) + base <= c:
        return mu_cap
    disc = top * top - 4.0 * (c - base) / a
    if disc < 0:
        return mu_cap
    mu = 0.5 * (top - math.sqrt(disc))
    return min(max(mu, 0.0), mu_cap)


def _structured_objective(s: int, lam: float, c: float, k: int, n: int) -> float:
    mu = _structured_best_mu(s, lam, c, k, n)
    if mu is None:
        return math.inf
    return 1.0 - (s - k + 1) * lam - mu


def opt_solve_numeric(n: int, k: int, c: float, resolution: float = 1e-4) -> OptSolution:
    """Numerically minimize the top-k sum over the feasible sorted simplex.

    If the uniform vector is feasible it is optimal (the top-k sum of any
    sorted probability vector is at least k/n). Otherwise sweep the support
    size s and a lambda grid at the given resolution, refine the best cell
    by ternary search, and rebuild the winning vector.
    """
    if not isinstance(k, int) or k < 2:
        raise InvalidParams(f"k must be an integer >= 2, got {k!r}")
    if not isinstance(n, int) or n <= k:
        raise InvalidParams(f"n must be an integer > k, got {n!r}")
    if not (c > 0 and math.isfinite(c)):
        raise InvalidParams(f"c must be positive, got {c!r}")
    if not (0 < resolution < 0.5):
        raise InvalidParams("resolution must be in (0, 0.5)")

    uniform = (1.0 / n,) * n
    sigma_u = sym_poly(uniform, k + 1)
    if sigma_u <= c:
        return OptSolution(
            n=n, k=k, c=c, objective=k / n, shape="uniform", w=uniform,
            sigma=sigma_u, s=None, lam=None, mu=None,
        )

    best = (math.inf, k - 1, 0.0, 0.0)  # objective, s, lam, mu
    for s in range(k - 1, n - 1):
        lam_max = 1.0 / (s + 1)
        grid = np.arange(resolution, lam_max + 0.5 * resolution, resolution)
        if grid.size == 0 or grid[-1] < lam_max:
            grid = np.append(grid, lam_max)
        # vectorized feasibility and objective on the grid
        c1 = comb(s, k - 1)
        c2 = comb(s, k)
        c3 = comb(s, k + 1)
        top = 1.0 - s * grid
        base = top * c2 * grid**k + c3 * grid ** (k + 1)
        feasible = base <= c
        if not feasible.any():
            continue
        lam_f = grid[feasible]
        top_f = top[feasible]
        base_f = base[feasible]
        mu_cap = np.minimum(lam_f, 1.0 - (s + 1) * lam_f)
        if s + 2 > n:
            mu_cap = np.zeros_like(lam_f)
        mu_cap = np.maximum(mu_cap, 0.0)
        a = c1 * lam_f ** (k - 1)
        with np.errstate(invalid="ignore", divide="ignore"):
            disc = top_f * top_f - 4.0 * (c - base_f) / np.where(a > 0, a, np.nan)
            root = 0.5 * (top_f - np.sqrt(np.maximum(disc, 0.0)))
        cap_ok = a * mu_cap * (top_f - mu_cap) + base_f <= c
        mu = np.where(cap_ok | (a <= 0) | np.isnan(disc) | (disc < 0), mu_cap,
                      np.clip(root, 0.0, mu_cap))
        obj = 1.0 - (s - k + 1) * lam_f - mu
        i = int(np.argmin(obj))
        # ternary polish around the winning grid cell
        lo = max(resolution * 0.01, float(lam_f[i]) - resolution)
        hi = min(lam_max, float(lam_f[i]) + resolution)
        for _ in range(60):
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if _structured_objective(s, m1, c, k, n) <= _structured_objective(s, m2, c, k, n):
                hi = m2
            else:
                lo = m1
        lam_best = 0.5 * (lo + hi)
        cand = [(float(obj[i]), s, float(lam_f[i])), (_structured_objective(s, lam_best, c, k, n), s, lam_best)]
        for f, ss, ll in cand:
            if f < best[0]:
                mm = _structured_best_mu(ss, ll, c, k, n)
                best = (f, ss, ll, mm if mm is not None else 0.0)

    obj, s, lam, mu = best
    if not math.isfinite(obj):
        # degenerate fallback: k-1 nonzero entries, sigma identically zero
        w = tuple(sorted([1.0 / (k - 1)] * (k - 1) + [0.0] * (n - k + 1), reverse=True)) if k > 1 else (1.0,) + (0.0,) * (n - 1)
        return OptSolution(n=n, k=k, c=c, objective=1.0, shape="structured",
                           w=w, sigma=sym_poly(w, k + 1), s=None, lam=None, mu=None)
    w1 = 1.0 - s * lam - mu
    vec = [w1] + [lam] * s + [mu]
    vec = vec + [0.0] * (n - len(vec))
    vec = tuple(sorted(vec, reverse=True))
    return OptSolution(
        n=n, k=k, c=c, objective=obj, shape="structured", w=vec,
        sigma=sym_poly(vec, k + 1), s=s, lam=lam, mu=mu,
    )


def _sorted_partitions(total: int, parts: int, cap: int):
    """Non-increasing tuples of `parts` non-negative ints summing to total."""
    if parts == 1:
        if total <= cap:
            yield (total,)
        return
    for first in range(min(total, cap), -1, -1):
        if first * parts < total:
            break
        for rest in _sorted_partitions(total - first, parts - 1, first):
            yield (first,) + rest


def opt_solve_grid(n: int, k: int, c: float, steps: int = 20) -> OptSolution:
    """Brute-force cross-check on the lattice w_i = a_i / steps.

    Exponentially slower than opt_solve_numeric and coarser, but makes no
    shape assumption; used to validate the structured-family solver.
    """
    if n <= k:
        raise InvalidParams("n must exceed k")
    best_obj = math.inf
    best_w: tuple[float, ...] = ()
    for part in _sorted_partitions(steps, n, steps):
        w = tuple(x / steps for x in part)
        if sym_poly(w, k + 1) > c:
            continue
        obj = sum(w[:k])
        if obj < best_obj:
            best_obj = obj
            best_w = w
    return OptSolution(
        n=n, k=k, c=c, objective=best_obj, shape="grid", w=best_w,
        sigma=sym_poly(best_w, k + 1) if best_w else 0.0, s=None, lam=None, mu=None,
    )
