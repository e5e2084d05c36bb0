"""Brute-force references: metric completion, Kruskal MST, exact small MGPF.

These deliberately share no algorithmic code with the incremental planner
machinery they are used to check: shortest paths go through scipy's
compiled Dijkstra and the MST uses its own union-find.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from .roadmap import Roadmap

HELD_KARP_MAX = 12


def metric_completion(rm: Roadmap, terminals) -> np.ndarray:
    """Exact pairwise shortest-path costs between terminals over the roadmap.

    Entry (i, j) is the cheapest roadmap path cost between terminals i and
    j, inf when disconnected.
    """
    terminals = list(terminals)
    t = len(terminals)
    out = np.zeros((t, t))
    if rm.num_nodes == 0 or t == 0:
        return out
    dmat = np.atleast_2d(
        _sp_dijkstra(rm.csr_graph(), directed=False, indices=terminals))
    for i in range(t):
        for j in range(t):
            if i != j:
                out[i, j] = dmat[i, terminals[j]]
    return out


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def kruskal(costs: np.ndarray):
    """Minimum spanning tree of a symmetric cost matrix.

    Returns (edges, weight); (None, inf) when the finite-cost graph does
    not span.
    """
    n = costs.shape[0]
    edges = sorted((float(costs[i, j]), (i, j))
                   for i, j in combinations(range(n), 2)
                   if math.isfinite(costs[i, j]))
    uf = _UnionFind(n)
    tree = []
    weight = 0.0
    for w, e in edges:
        if uf.union(*e):
            tree.append(e)
            weight += w
    if len(tree) != n - 1:
        return None, math.inf
    return tree, weight


def optimal_mgpf(costs: np.ndarray, s: int = 0, d: int | None = None):
    """Exact minimum-cost path visiting every terminal, from s to d.

    Held-Karp over subsets; by the triangle inequality of shortest-path
    costs, visiting each terminal exactly once is optimal.  Limited to 12
    terminals.
    """
    n = costs.shape[0]
    if d is None:
        d = n - 1
    if n > HELD_KARP_MAX:
        raise ValueError(f"Held-Karp limited to {HELD_KARP_MAX} terminals, got {n}")
    if not np.all(np.isfinite(costs)):
        raise ValueError("cost matrix must be finite")
    if n == 2:
        return [s, d], float(costs[s, d])
    inner = [k for k in range(n) if k not in (s, d)]
    # dp[(mask, k)] = (cost, order) of the best s -> k path covering mask
    dp = {}
    for k in inner:
        dp[(1 << k, k)] = (float(costs[s, k]), [s, k])
    for size in range(2, len(inner) + 1):
        for subset in combinations(inner, size):
            mask = 0
            for k in subset:
                mask |= 1 << k
            for k in subset:
                prev_mask = mask ^ (1 << k)
                best = None
                for j in subset:
                    if j == k:
                        continue
                    entry = dp.get((prev_mask, j))
                    if entry is None:
                        continue
                    cand = entry[0] + float(costs[j, k])
                    if best is None or cand < best[0]:
                        best = (cand, entry[1] + [k])
                if best is not None:
                    dp[(mask, k)] = best
    full = 0
    for k in inner:
        full |= 1 << k
    best = (float(costs[s, d]), [s, d]) if not inner else None
    for k in inner:
        entry = dp.get((full, k))
        if entry is None:
            continue
        cand = entry[0] + float(costs[k, d])
        if best is None or cand < best[0]:
            best = (cand, entry[1] + [d])
    return best[1], best[0]
