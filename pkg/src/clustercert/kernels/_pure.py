"""Pure-Python search kernels.

These are the reference implementations; clustercert.kernels._native mirrors
them statement for statement. Visit order, float-operation order, and node
counting must stay bit-identical between the two backends, so any change here
has to be ported verbatim.

Node convention: one node per visit of a search state (root and leaves
included). When the node counter passes the budget the search unwinds
immediately and reports the incumbent found so far.
"""

from __future__ import annotations

import sys

import numpy as np


def _ensure_recursion(depth: int) -> None:
    need = depth + 200
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def max_weight_clique(adj: np.ndarray, w: np.ndarray, budget: int):
    """Maximum-weight clique via branch and bound with a greedy coloring bound.

    adj is a dense boolean/uint8 adjacency matrix (irreflexive), w strictly
    positive vertex weights. Vertices are expanded in ascending index order
    and the incumbent is replaced only on strict improvement, so the returned
    clique is the lexicographically smallest among maximum-weight cliques.

    Returns (clique_indices, weight, nodes, exceeded).
    """
    n = adj.shape[0]
    _ensure_recursion(n)
    wl = [float(x) for x in w]
    nbr = []
    for i in range(n):
        row = adj[i]
        m = 0
        for j in range(n):
            if j != i and row[j]:
                m |= 1 << j
        nbr.append(m)

    best: list[int] = []
    best_w = 0.0
    cur: list[int] = []
    state = [0, False]  # nodes, exceeded

    def color_bound(cand):
        # Greedy coloring: candidates in ascending order, first class that
        # contains no neighbor. Bound = sum of per-class max weights.
        masks: list[int] = []
        tops: list[float] = []
        for v in cand:
            nv = nbr[v]
            placed = False
            for ci in range(len(masks)):
                if not (masks[ci] & nv):
                    masks[ci] |= 1 << v
                    if wl[v] > tops[ci]:
                        tops[ci] = wl[v]
                    placed = True
                    break
            if not placed:
                masks.append(1 << v)
                tops.append(wl[v])
        ub = 0.0
        for t in tops:
            ub += t
        return ub

    def expand(cand, cur_w):
        nonlocal best, best_w
        state[0] += 1
        if state[0] > budget:
            state[1] = True
            return
        if cur_w > best_w:
            best = cur.copy()
            best_w = cur_w
        if not cand:
            return
        rem = 0.0
        for v in cand:
            rem += wl[v]
        if cur_w + rem <= best_w:
            return
        if cur_w + color_bound(cand) <= best_w:
            return
        for i, v in enumerate(cand):
            if state[1]:
                return
            if cur_w + rem <= best_w:
                return
            nv = nbr[v]
            nxt = [u for u in cand[i + 1 :] if (nv >> u) & 1]
            cur.append(v)
            expand(nxt, cur_w + wl[v])
            cur.pop()
            rem = rem - wl[v]

    expand(list(range(n)), 0.0)
    return best, best_w, state[0], state[1]


def count_anticliques(adj: np.ndarray, w: np.ndarray, size: int, lo: int, hi: int, budget: int):
    """Weighted count of `size`-subsets that are cliques of adj, per root.

    Root v owns the subsets whose minimum index is v. Each root's DFS is
    capped at `budget` nodes on its own. Returns three arrays indexed by
    v - lo: subset mass, nodes visited, cap-hit flag.
    """
    n = adj.shape[0]
    _ensure_recursion(size)
    wl = [float(x) for x in w]
    nbr = []
    for i in range(n):
        row = adj[i]
        m = 0
        for j in range(n):
            if j != i and row[j]:
                m |= 1 << j
        nbr.append(m)

    totals = np.zeros(hi - lo, dtype=np.float64)
    nodes = np.zeros(hi - lo, dtype=np.int64)
    capped = np.zeros(hi - lo, dtype=bool)

    for v in range(lo, hi):
        state = [0, False]
        acc = [0.0]

        def rec(cand, depth, prod):
            state[0] += 1
            if state[0] > budget:
                state[1] = True
                return
            need = size - depth
            if need == 0:
                acc[0] = acc[0] + prod
                return
            if len(cand) < need:
                return
            if need == 1:
                s = 0.0
                for u in cand:
                    s += wl[u]
                acc[0] = acc[0] + prod * s
                return
            for i, u in enumerate(cand):
                if state[1]:
                    return
                if len(cand) - i < need:
                    break
                nu = nbr[u]
                nxt = [x for x in cand[i + 1 :] if (nu >> x) & 1]
                rec(nxt, depth + 1, prod * wl[u])

        nv = nbr[v]
        root_cand = [u for u in range(v + 1, n) if (nv >> u) & 1]
        rec(root_cand, 1, wl[v])
        totals[v - lo] = acc[0]
        nodes[v - lo] = state[0]
        capped[v - lo] = state[1]

    return totals, nodes, capped


def best_assignment(
    dist: np.ndarray,
    w: np.ndarray,
    k: int,
    diam_bound: float,
    sep_bound: float,
    budget: int,
):
    """Exhaustive best assignment of points to k clusters or outside.

    Feasibility: within a cluster every pairwise distance <= diam_bound;
    across two distinct clusters every distance >= sep_bound. Labels follow
    restricted growth (a new cluster label is opened only in first-use
    order), which quotients out label permutations. Values are tried in
    ascending order (0 = outside first) with strict-improvement incumbent
    updates, so the winning assignment is lexicographically smallest among
    the maximum-measure ones.

    Returns (assignment, measure, nodes, exceeded); assignment is None when
    the budget ran out before the first leaf.
    """
    n = dist.shape[0]
    _ensure_recursion(n)
    wl = [float(x) for x in w]
    rows = [[float(x) for x in dist[i]] for i in range(n)]
    suffix = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = wl[i] + suffix[i + 1]

    assign = [0] * n
    found = [False]
    best_assign = [0] * n
    best_m = -1.0
    state = [0, False]

    def rec(i, cur_m, used):
        nonlocal best_m
        state[0] += 1
        if state[0] > budget:
            state[1] = True
            return
        if i == n:
            if cur_m > best_m:
                best_m = cur_m
                best_assign[:] = assign
                found[0] = True
            return
        if cur_m + suffix[i] <= best_m:
            return
        assign[i] = 0
        rec(i + 1, cur_m, used)
        if state[1]:
            return
        top = used + 1 if used < k else k
        di = rows[i]
        for c in range(1, top + 1):
            ok = True
            for j in range(i):
                aj = assign[j]
                if aj == 0:
                    continue
                dij = di[j]
                if aj == c:
                    if dij > diam_bound:
                        ok = False
                        break
                elif dij < sep_bound:
                    ok = False
                    break
            if ok:
                assign[i] = c
                rec(i + 1, cur_m + wl[i], used + 1 if c > used else used)
                if state[1]:
                    assign[i] = 0
                    return
        assign[i] = 0

    rec(0, 0.0, 0)
    result = list(best_assign) if found[0] else None
    return result, best_m, state[0], state[1]
