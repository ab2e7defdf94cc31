# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the pure-Python search kernels.

Statement-for-statement mirror of clustercert.kernels._pure: visit order,
float-operation order, and node counting are bit-identical with the pure
backend. Change both files together or the backend-equivalence tests fail.
"""

import numpy as np


def _carr(x, dtype):
    # Typed memoryviews need writable buffers; inputs may be frozen.
    a = np.ascontiguousarray(x, dtype=dtype)
    if not a.flags.writeable:
        a = a.copy()
    return a


cdef class _Clique:
    cdef unsigned char[:, ::1] adj
    cdef double[::1] w
    cdef unsigned long long[:, ::1] nbr
    cdef unsigned long long[:, ::1] cls_mask
    cdef double[::1] cls_top
    cdef int[:, ::1] cand
    cdef int[::1] cur
    cdef int[::1] best
    cdef int n, nwords, cur_len, best_len
    cdef double best_w
    cdef long long nodes, budget
    cdef bint exceeded

    def __init__(self, unsigned char[:, ::1] adj, double[::1] w, long long budget):
        cdef int n = adj.shape[0]
        cdef int i, j
        self.adj = adj
        self.w = w
        self.n = n
        self.nwords = (n + 63) >> 6
        self.budget = budget
        nb = np.zeros((max(n, 1), max(self.nwords, 1)), dtype=np.uint64)
        cdef unsigned long long[:, ::1] nbv = nb
        for i in range(n):
            for j in range(n):
                if j != i and adj[i, j]:
                    nbv[i, j >> 6] |= (<unsigned long long>1) << (j & 63)
        self.nbr = nbv
        self.cls_mask = np.zeros((max(n, 1), max(self.nwords, 1)), dtype=np.uint64)
        self.cls_top = np.zeros(max(n, 1), dtype=np.float64)
        self.cand = np.zeros((n + 1, max(n, 1)), dtype=np.int32)
        self.cur = np.zeros(max(n, 1), dtype=np.int32)
        self.best = np.zeros(max(n, 1), dtype=np.int32)
        self.cur_len = 0
        self.best_len = 0
        self.best_w = 0.0
        self.nodes = 0
        self.exceeded = False

    cdef double color_bound(self, int depth, int m):
        # Greedy coloring: candidates in ascending order, first class that
        # contains no neighbor. Bound = sum of per-class max weights.
        cdef int ncls = 0
        cdef int i, ci, t, v
        cdef bint conflict, placed
        cdef double ub
        for i in range(m):
            v = self.cand[depth, i]
            placed = False
            for ci in range(ncls):
                conflict = False
                for t in range(self.nwords):
                    if self.cls_mask[ci, t] & self.nbr[v, t]:
                        conflict = True
                        break
                if not conflict:
                    self.cls_mask[ci, v >> 6] |= (<unsigned long long>1) << (v & 63)
                    if self.w[v] > self.cls_top[ci]:
                        self.cls_top[ci] = self.w[v]
                    placed = True
                    break
            if not placed:
                for t in range(self.nwords):
                    self.cls_mask[ncls, t] = 0
                self.cls_mask[ncls, v >> 6] = (<unsigned long long>1) << (v & 63)
                self.cls_top[ncls] = self.w[v]
                ncls += 1
        ub = 0.0
        for ci in range(ncls):
            ub += self.cls_top[ci]
        return ub

    cdef void expand(self, int depth, double cur_w, int m):
        cdef int i, j, v, u, cnt
        cdef double rem
        self.nodes += 1
        if self.nodes > self.budget:
            self.exceeded = True
            return
        if cur_w > self.best_w:
            for i in range(self.cur_len):
                self.best[i] = self.cur[i]
            self.best_len = self.cur_len
            self.best_w = cur_w
        if m == 0:
            return
        rem = 0.0
        for i in range(m):
            rem += self.w[self.cand[depth, i]]
        if cur_w + rem <= self.best_w:
            return
        if cur_w + self.color_bound(depth, m) <= self.best_w:
            return
        for i in range(m):
            if self.exceeded:
                return
            if cur_w + rem <= self.best_w:
                return
            v = self.cand[depth, i]
            cnt = 0
            for j in range(i + 1, m):
                u = self.cand[depth, j]
                if self.nbr[v, u >> 6] & ((<unsigned long long>1) << (u & 63)):
                    self.cand[depth + 1, cnt] = u
                    cnt += 1
            self.cur[self.cur_len] = v
            self.cur_len += 1
            self.expand(depth + 1, cur_w + self.w[v], cnt)
            self.cur_len -= 1
            rem = rem - self.w[v]

    def run(self):
        cdef int i
        for i in range(self.n):
            self.cand[0, i] = i
        self.expand(0, 0.0, self.n)
        return (
            [int(self.best[i]) for i in range(self.best_len)],
            float(self.best_w),
            int(self.nodes),
            bool(self.exceeded),
        )


def max_weight_clique(adj, w, budget):
    """Maximum-weight clique via branch and bound; see _pure for semantics."""
    a = _carr(adj, np.uint8)
    ww = _carr(w, np.float64)
    return _Clique(a, ww, int(budget)).run()


cdef class _Anti:
    cdef unsigned long long[:, ::1] nbr
    cdef double[::1] w
    cdef int[:, ::1] cand
    cdef int n, size
    cdef long long nodes, budget
    cdef bint capped
    cdef double acc

    def __init__(self, unsigned char[:, ::1] adj, double[::1] w, int size, long long budget):
        cdef int n = adj.shape[0]
        cdef int i, j
        cdef int nwords = (n + 63) >> 6
        self.w = w
        self.n = n
        self.size = size
        self.budget = budget
        nb = np.zeros((max(n, 1), max(nwords, 1)), dtype=np.uint64)
        cdef unsigned long long[:, ::1] nbv = nb
        for i in range(n):
            for j in range(n):
                if j != i and adj[i, j]:
                    nbv[i, j >> 6] |= (<unsigned long long>1) << (j & 63)
        self.nbr = nbv
        self.cand = np.zeros((size + 1, max(n, 1)), dtype=np.int32)

    cdef void rec(self, int depth, double prod, int m, int level):
        cdef int need, i, j, u, x, cnt
        cdef double s
        self.nodes += 1
        if self.nodes > self.budget:
            self.capped = True
            return
        need = self.size - depth
        if need == 0:
            self.acc = self.acc + prod
            return
        if m < need:
            return
        if need == 1:
            s = 0.0
            for i in range(m):
                s += self.w[self.cand[level, i]]
            self.acc = self.acc + prod * s
            return
        for i in range(m):
            if self.capped:
                return
            if m - i < need:
                break
            u = self.cand[level, i]
            cnt = 0
            for j in range(i + 1, m):
                x = self.cand[level, j]
                if self.nbr[u, x >> 6] & ((<unsigned long long>1) << (x & 63)):
                    self.cand[level + 1, cnt] = x
                    cnt += 1
            self.rec(depth + 1, prod * self.w[u], cnt, level + 1)

    def run_root(self, int v):
        cdef int u, cnt
        self.nodes = 0
        self.capped = False
        self.acc = 0.0
        cnt = 0
        for u in range(v + 1, self.n):
            if self.nbr[v, u >> 6] & ((<unsigned long long>1) << (u & 63)):
                self.cand[0, cnt] = u
                cnt += 1
        self.rec(1, self.w[v], cnt, 0)
        return float(self.acc), int(self.nodes), bool(self.capped)


def count_anticliques(adj, w, size, lo, hi, budget):
    """Weighted subset counts per root vertex; see _pure for semantics."""
    a = _carr(adj, np.uint8)
    ww = _carr(w, np.float64)
    totals = np.zeros(hi - lo, dtype=np.float64)
    nodes = np.zeros(hi - lo, dtype=np.int64)
    capped = np.zeros(hi - lo, dtype=bool)
    search = _Anti(a, ww, int(size), int(budget))
    cdef int v
    for v in range(lo, hi):
        acc, cnt, hit = search.run_root(v)
        totals[v - lo] = acc
        nodes[v - lo] = cnt
        capped[v - lo] = hit
    return totals, nodes, capped


cdef class _Assign:
    cdef double[:, ::1] dist
    cdef double[::1] w
    cdef double[::1] suffix
    cdef int[::1] assign
    cdef int[::1] best_assign
    cdef int n, k
    cdef double diam_bound, sep_bound, best_m
    cdef long long nodes, budget
    cdef bint exceeded, found

    def __init__(
        self,
        double[:, ::1] dist,
        double[::1] w,
        int k,
        double diam_bound,
        double sep_bound,
        long long budget,
    ):
        cdef int n = dist.shape[0]
        cdef int i
        self.dist = dist
        self.w = w
        self.n = n
        self.k = k
        self.diam_bound = diam_bound
        self.sep_bound = sep_bound
        self.budget = budget
        suf = np.zeros(n + 1, dtype=np.float64)
        cdef double[::1] sufv = suf
        for i in range(n - 1, -1, -1):
            sufv[i] = w[i] + sufv[i + 1]
        self.suffix = sufv
        self.assign = np.zeros(max(n, 1), dtype=np.int32)
        self.best_assign = np.zeros(max(n, 1), dtype=np.int32)
        self.best_m = -1.0
        self.nodes = 0
        self.exceeded = False
        self.found = False

    cdef void rec(self, int i, double cur_m, int used):
        cdef int j, c, top, aj
        cdef double dij
        cdef bint ok
        self.nodes += 1
        if self.nodes > self.budget:
            self.exceeded = True
            return
        if i == self.n:
            if cur_m > self.best_m:
                self.best_m = cur_m
                for j in range(self.n):
                    self.best_assign[j] = self.assign[j]
                self.found = True
            return
        if cur_m + self.suffix[i] <= self.best_m:
            return
        self.assign[i] = 0
        self.rec(i + 1, cur_m, used)
        if self.exceeded:
            return
        top = used + 1 if used < self.k else self.k
        for c in range(1, top + 1):
            ok = True
            for j in range(i):
                aj = self.assign[j]
                if aj == 0:
                    continue
                dij = self.dist[i, j]
                if aj == c:
                    if dij > self.diam_bound:
                        ok = False
                        break
                elif dij < self.sep_bound:
                    ok = False
                    break
            if ok:
                self.assign[i] = c
                self.rec(i + 1, cur_m + self.w[i], used + 1 if c > used else used)
                if self.exceeded:
                    self.assign[i] = 0
                    return
        self.assign[i] = 0

    def run(self):
        cdef int i
        self.rec(0, 0.0, 0)
        result = [int(self.best_assign[i]) for i in range(self.n)] if self.found else None
        return result, float(self.best_m), int(self.nodes), bool(self.exceeded)


def best_assignment(dist, w, k, diam_bound, sep_bound, budget):
    """Exhaustive cluster assignment search; see _pure for semantics."""
    d = _carr(dist, np.float64)
    ww = _carr(w, np.float64)
    return _Assign(d, ww, int(k), float(diam_bound), float(sep_bound), int(budget)).run()
