"""Twin-kernel contract: the compiled and pure implementations must agree
exactly, including visited node counts and budget truncation behavior."""

import os
import subprocess
import sys

import numpy as np
import pytest

from clustercert.kernels import _pure

native = pytest.importorskip(
    "clustercert.kernels._native", reason="compiled backend not built"
)


def random_graph(seed, n, p=0.4):
    rng = np.random.default_rng(seed)
    adj = (rng.random((n, n)) < p).astype(np.uint8)
    adj = np.triu(adj, 1)
    adj = adj + adj.T
    w = rng.uniform(0.1, 2.0, n)
    return np.ascontiguousarray(adj), w


def random_dist(seed, n):
    rng = np.random.default_rng(seed)
    m = rng.uniform(0, 2, (n, n))
    d = (m + m.T) / 2
    np.fill_diagonal(d, 0)
    return np.ascontiguousarray(d), rng.uniform(0.1, 2.0, n)


BIG = 1 << 40


class TestCliqueTwins:
    @pytest.mark.parametrize("seed", range(12))
    def test_identical_results(self, seed):
        adj, w = random_graph(seed, 30 + seed)
        p = _pure.max_weight_clique(adj, w, BIG)
        c = native.max_weight_clique(adj, w, BIG)
        assert p[0] == c[0]
        assert p[1] == c[1]  # bitwise equal floats, same op order
        assert p[2] == c[2]  # node counts
        assert p[3] == c[3] is False

    @pytest.mark.parametrize("budget", [1, 2, 5, 17, 99])
    def test_identical_truncation(self, budget):
        adj, w = random_graph(100, 40)
        p = _pure.max_weight_clique(adj, w, budget)
        c = native.max_weight_clique(adj, w, budget)
        assert p == (c[0], c[1], c[2], c[3])
        assert p[3] is True and p[2] <= budget + 1

    def test_read_only_inputs_accepted(self):
        adj, w = random_graph(5, 20)
        adj.flags.writeable = False
        w.flags.writeable = False
        assert native.max_weight_clique(adj, w, BIG)[:2] == _pure.max_weight_clique(
            adj, w, BIG
        )[:2]

    def test_empty_graph(self):
        adj = np.zeros((4, 4), dtype=np.uint8)
        w = np.ones(4)
        for impl in (_pure, native):
            clique, wt, nodes, exceeded = impl.max_weight_clique(adj, w, BIG)
            assert clique == [0] and wt == 1.0 and not exceeded


class TestAnticliqueTwins:
    @pytest.mark.parametrize("seed,size", [(0, 3), (1, 3), (2, 4), (3, 5)])
    def test_identical_counts(self, seed, size):
        adj, w = random_graph(seed, 26)
        p = _pure.count_anticliques(adj, w, size, 0, 26, BIG)
        c = native.count_anticliques(adj, w, size, 0, 26, BIG)
        for a, b in zip(p, c):
            assert np.array_equal(a, b)

    def test_chunks_compose(self):
        adj, w = random_graph(7, 20)
        whole = _pure.count_anticliques(adj, w, 3, 0, 20, BIG)
        left = native.count_anticliques(adj, w, 3, 0, 9, BIG)
        right = native.count_anticliques(adj, w, 3, 9, 20, BIG)
        assert np.array_equal(np.concatenate([left[0], right[0]]), whole[0])
        assert np.array_equal(np.concatenate([left[1], right[1]]), whole[1])

    def test_root_ownership(self):
        # complete graph: root v owns C(n-1-v, size-1) subsets
        n, size = 8, 3
        adj = np.ones((n, n), dtype=np.uint8)
        np.fill_diagonal(adj, 0)
        w = np.ones(n)
        import math

        for impl in (_pure, native):
            totals, nodes, capped = impl.count_anticliques(adj, w, size, 0, n, BIG)
            for v in range(n):
                assert totals[v] == math.comb(n - 1 - v, size - 1)
            assert not capped.any()

    @pytest.mark.parametrize("cap", [1, 3, 10])
    def test_identical_capping(self, cap):
        adj, w = random_graph(9, 24, p=0.7)
        p = _pure.count_anticliques(adj, w, 3, 0, 24, cap)
        c = native.count_anticliques(adj, w, 3, 0, 24, cap)
        for a, b in zip(p, c):
            assert np.array_equal(a, b)
        assert p[2].any()


class TestAssignmentTwins:
    @pytest.mark.parametrize("seed,k", [(0, 2), (1, 2), (2, 3), (3, 4)])
    def test_identical_results(self, seed, k):
        d, w = random_dist(seed, 9)
        p = _pure.best_assignment(d, w, k, 1.0, 0.3, BIG)
        c = native.best_assignment(d, w, k, 1.0, 0.3, BIG)
        assert p[0] == c[0]
        assert p[1] == c[1]
        assert p[2] == c[2]
        assert p[3] == c[3]

    @pytest.mark.parametrize("budget", [1, 10, 200])
    def test_identical_truncation(self, budget):
        d, w = random_dist(11, 10)
        p = _pure.best_assignment(d, w, 2, 1.0, 0.3, budget)
        c = native.best_assignment(d, w, 2, 1.0, 0.3, budget)
        assert p == c

    def test_labels_are_canonical(self):
        # first used label is 1, labels introduced in increasing order
        d, w = random_dist(4, 8)
        assign, _, _, _ = _pure.best_assignment(d, w, 3, 1.5, 0.1, BIG)
        seen = []
        for a in assign:
            if a and a not in seen:
                seen.append(a)
        assert seen == sorted(seen)


class TestBackendSelection:
    def test_env_forces_pure(self):
        code = (
            "from clustercert import kernels; print(kernels.BACKEND)"
        )
        out = subprocess.run(
            [sys.executable, "-c", code],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin", "CLUSTERCERT_PURE": "1"},
        )
        assert out.stdout.strip() == "pure"

    def test_default_prefers_native(self):
        if os.environ.get("CLUSTERCERT_PURE"):
            pytest.skip("suite forced onto the pure backend")
        from clustercert import kernels

        assert kernels.BACKEND == "native"
