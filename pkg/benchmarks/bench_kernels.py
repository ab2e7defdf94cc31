"""Timing comparison of the compiled kernels against the pure fallback.

Run from the repo root:

    python3 benchmarks/bench_kernels.py

Each case runs both implementations on identical inputs, checks that the
results agree exactly (values, node counts), and prints the speedup.
"""

from __future__ import annotations

import time

import numpy as np

from clustercert.kernels import _pure

try:
    from clustercert.kernels import _native
except ImportError:  # pragma: no cover
    _native = None


def geometric_graph(n: int, radius: float, seed: int):
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    adj = (d <= radius).astype(np.uint8)
    np.fill_diagonal(adj, 0)
    w = rng.uniform(0.5, 1.5, n)
    return adj, w, d


def timed(fn, *args, repeats: int = 3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return out, best


def check_clique(a, b):
    assert a[0] == b[0] and a[1] == b[1] and a[2] == b[2] and a[3] == b[3], (a, b)


def check_anti(a, b):
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1]), (a, b)
    assert np.array_equal(a[2], b[2])


def check_assign(a, b):
    assert a[0] == b[0] and a[1] == b[1] and a[2] == b[2] and a[3] == b[3], (a, b)


def main() -> None:
    if _native is None:
        print("compiled backend unavailable; nothing to compare")
        return
    budget = 1 << 40
    rows = []

    for n, radius in ((80, 0.35), (120, 0.3)):
        adj, w, _ = geometric_graph(n, radius, seed=n)
        pa, ta = timed(_pure.max_weight_clique, adj, w, budget)
        na, tn = timed(_native.max_weight_clique, adj, w, budget)
        check_clique(pa, na)
        rows.append((f"clique n={n} r={radius}", ta, tn, pa[2]))

    for n, size in ((60, 3), (60, 4)):
        adj, w, _ = geometric_graph(n, 0.4, seed=size)
        anti = 1 - adj
        np.fill_diagonal(anti, 0)
        pa, ta = timed(_pure.count_anticliques, anti.astype(np.uint8), w, size, 0, n, budget)
        na, tn = timed(_native.count_anticliques, anti.astype(np.uint8), w, size, 0, n, budget)
        check_anti(pa, na)
        rows.append((f"anticliques n={n} size={size}", ta, tn, int(pa[1].sum())))

    for n, k in ((12, 2), (12, 3)):
        _, w, d = geometric_graph(n, 0.0, seed=10 * n + k)
        pa, ta = timed(_pure.best_assignment, d, w, k, 0.6, 0.25, budget)
        na, tn = timed(_native.best_assignment, d, w, k, 0.6, 0.25, budget)
        check_assign(pa, na)
        rows.append((f"assignment n={n} k={k}", ta, tn, pa[2]))

    width = max(len(r[0]) for r in rows)
    print(f"{'case':<{width}}  {'pure':>10}  {'native':>10}  {'speedup':>8}  {'nodes':>10}")
    for name, ta, tn, nodes in rows:
        print(f"{name:<{width}}  {ta:>9.4f}s  {tn:>9.4f}s  {ta / tn:>7.1f}x  {nodes:>10}")


if __name__ == "__main__":
    main()
