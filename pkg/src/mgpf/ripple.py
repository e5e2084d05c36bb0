"""Incremental maintenance of the shortest-path forest rooted at terminals.

Each node carries g (cost to its closest terminal), a parent pointer and
the root terminal that claims it.  Inserting a sample attaches it to its
best rooted neighbour and then relaxes outward Dijkstra-style; whenever an
expansion reaches a node held by a different root without improving it, a
cheaper inter-terminal path may have been witnessed and the terminal-graph
cost for that root pair is lowered.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from .informed import SampleBatch
from .roadmap import Roadmap

INF = math.inf


@dataclass
class MeetRecord:
    """A witnessed cross-root path: cost = g(n) + dist(n, m) + g(m)."""
    terminal_a: int
    terminal_b: int
    cost: float
    via: tuple[int, int]


class Forest:
    """Per-node g-value, parent and root terminal over the roadmap nodes.

    Terminals are their own parents and roots with g = 0; unclaimed nodes
    carry g = inf, which lets a later expansion claim them through the
    ordinary relaxation test.
    """

    def __init__(self, num_terminals: int):
        self.num_terminals = num_terminals
        self.g = [0.0] * num_terminals
        self.parent = list(range(num_terminals))
        self.root = list(range(num_terminals))

    def grow_to(self, n: int):
        extra = n - len(self.g)
        if extra > 0:
            self.g.extend([INF] * extra)
            self.parent.extend([-1] * extra)
            self.root.extend([-1] * extra)

    def tree_edges(self) -> set[tuple[int, int]]:
        """The forest's edge set {(u, parent(u))} over claimed non-terminals."""
        return {(u, p) for u, p in enumerate(self.parent)
                if u >= self.num_terminals and p >= 0}


def ripple(rm: Roadmap, forest: Forest, tg, batch: SampleBatch) -> list[MeetRecord]:
    """Insert a batch of samples and propagate shortest-path improvements.

    Returns the improving meet events in discovery order (the last record
    for a pair is its best).  Terminal-pair costs are lowered even for
    pairs already pruned from the active set; pruned pairs simply receive
    no further samples.
    """
    g = forest.g
    parent = forest.parent
    root = forest.root
    cost = tg.cost
    h = tg.h
    records: list[MeetRecord] = []
    for s_cfg in batch.points:
        sid, _ = rm.add_node(s_cfg)
        forest.grow_to(rm.num_nodes)
        best_n = -1
        best_g = INF
        for v, w in rm.adj[sid]:
            if root[v] >= 0 and g[v] + w < best_g:
                best_g = g[v] + w
                best_n = v
        if best_n < 0:
            continue
        g[sid] = best_g
        root[sid] = root[best_n]
        parent[sid] = best_n
        queue = [(best_g, sid)]
        while queue:
            gu, u = heapq.heappop(queue)
            if gu > g[u]:
                continue
            ru = root[u]
            for v, w in rm.adj[u]:
                alt = gu + w
                if alt < g[v]:
                    g[v] = alt
                    root[v] = ru
                    parent[v] = u
                    heapq.heappush(queue, (alt, v))
                elif root[v] != ru:
                    d = g[v] + w + gu
                    a, b = (ru, root[v]) if ru < root[v] else (root[v], ru)
                    if d < cost[a, b]:
                        d = max(d, h[a, b])
                        cost[a, b] = d
                        cost[b, a] = d
                        records.append(MeetRecord(a, b, d, (u, v)))
        # samples whose whole neighbourhood is rootless stay unclaimed and
        # are picked up by a later expansion through the g = inf comparison
    return records


def verify_forest(rm: Roadmap, forest: Forest, tol: float = 1e-9) -> bool:
    """Check the forest against exact multi-source shortest paths.

    True iff every reachable node's g matches its distance to the nearest
    terminal and its root is one of the nearest terminals.  Uses scipy's
    Dijkstra, which shares nothing with the incremental updates above.
    """
    n = rm.num_nodes
    t = forest.num_terminals
    if n == 0 or t == 0:
        return True
    dmat = _sp_dijkstra(rm.csr_graph(), directed=False, indices=range(t))
    dmat = np.atleast_2d(dmat)
    dmin = dmat.min(axis=0)
    g = np.array(forest.g)
    root = np.array(forest.root)
    reachable = np.isfinite(dmin)
    if np.any(np.isfinite(g) != reachable):
        return False
    if not np.all(np.abs(g[reachable] - dmin[reachable]) <= tol):
        return False
    idx = np.flatnonzero(reachable)
    if np.any(root[idx] < 0):
        return False
    root_dist = dmat[root[idx], idx]
    return bool(np.all(root_dist <= dmin[idx] + tol))
