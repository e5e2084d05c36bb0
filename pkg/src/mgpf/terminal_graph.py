"""The terminal graph: pair costs, active set, spanning tree and sampling weights.

Pair costs start at the cost of any direct roadmap edge between two
terminals (infinity otherwise) and only ever decrease as cheaper feasible
paths are witnessed.  The spanning tree is bootstrapped by Kruskal once the
finite-cost subgraph spans, then maintained by the MST cycle property: a
non-tree edge cheaper than the costliest edge on its induced cycle swaps in.
Edges whose Euclidean lower bound exceeds that cycle maximum can never join
any future MST and are pruned outright.
"""

from __future__ import annotations

import math

import numpy as np


Pair = tuple[int, int]


def _pair(u: int, v: int) -> Pair:
    return (u, v) if u < v else (v, u)


class TerminalGraph:
    """Terminals with their pairwise cost bounds, active edges and tree."""

    def __init__(self, coords: np.ndarray, s: int = 0, d: int | None = None):
        coords = np.asarray(coords, dtype=float)
        n = coords.shape[0]
        if n < 2:
            raise ValueError("need at least two terminals")
        self.coords = coords
        self.n = n
        self.s = s
        self.d = n - 1 if d is None else d
        diff = coords[:, None, :] - coords[None, :, :]
        self.h = np.linalg.norm(diff, axis=2)
        if np.any(self.h[~np.eye(n, dtype=bool)] == 0.0):
            raise ValueError("terminals must be pairwise distinct")
        self.cost = np.full((n, n), math.inf)
        np.fill_diagonal(self.cost, 0.0)
        self.active: set[Pair] = {(i, j) for i in range(n) for j in range(i + 1, n)}
        self.tree: set[Pair] = set()

    # -- tree structure -------------------------------------------------

    def spans(self) -> bool:
        return len(self.tree) == self.n - 1

    def tree_weight(self) -> float:
        if not self.spans():
            return math.inf
        return float(sum(self.cost[e] for e in self.tree))

    def _tree_adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {i: [] for i in range(self.n)}
        for u, v in self.tree:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def tree_path(self, u: int, v: int) -> list[Pair]:
        """Edges on the unique tree path between two terminals."""
        if not self.spans():
            raise ValueError("terminal tree does not span")
        adj = self._tree_adjacency()
        prev = {u: -1}
        stack = [u]
        while stack:
            x = stack.pop()
            if x == v:
                break
            for y in adj[x]:
                if y not in prev:
                    prev[y] = x
                    stack.append(y)
        if v not in prev:
            raise ValueError(f"no tree path between {u} and {v}")
        path = []
        x = v
        while x != u:
            path.append(_pair(x, prev[x]))
            x = prev[x]
        path.reverse()
        return path

    def cycle_max_edge(self, e: Pair) -> tuple[Pair, float]:
        """Costliest tree edge on the cycle a non-tree edge would induce.

        Ties go to the lexicographically smallest pair so scans are
        deterministic.
        """
        e = _pair(*e)
        if e in self.tree:
            raise ValueError(f"{e} is a tree edge")
        best = None
        best_c = -math.inf
        for pe in self.tree_path(*e):
            c = float(self.cost[pe])
            if c > best_c or (c == best_c and pe < best):
                best = pe
                best_c = c
        return best, best_c

    # -- updates --------------------------------------------------------

    def update_tree(self, scan_order=None):
        """Restore the tree to an MST of the current costs (one pass).

        While no tree exists, Kruskal is attempted over the finite-cost
        active edges and installed only if it spans.  Otherwise every
        active non-tree edge is scanned (lexicographically unless a scan
        order is given): a cycle-property violation swaps the edge in, and
        a cheaper tree path lowers the edge's own cost bound.
        """
        if not self.tree:
            tree = self._kruskal()
            if tree is not None:
                self.tree = tree
            return
        if scan_order is None:
            scan_order = sorted(self.active - self.tree)
        for e in scan_order:
            e = _pair(*e)
            if e in self.tree or e not in self.active:
                continue
            path = self.tree_path(*e)
            path_cost = float(sum(self.cost[pe] for pe in path))
            star, star_c = None, -math.inf
            for pe in path:
                c = float(self.cost[pe])
                if c > star_c or (c == star_c and pe < star):
                    star, star_c = pe, c
            ce = float(self.cost[e])
            if star_c > ce:
                self.tree.discard(star)
                self.tree.add(e)
            elif path_cost < ce:
                lowered = max(path_cost, float(self.h[e]))
                self.cost[e] = lowered
                self.cost[e[1], e[0]] = lowered

    def _kruskal(self) -> set[Pair] | None:
        edges = sorted((float(self.cost[e]), e) for e in self.active
                       if math.isfinite(self.cost[e]))
        uf = list(range(self.n))

        def find(x):
            while uf[x] != x:
                uf[x] = uf[uf[x]]
                x = uf[x]
            return x

        tree: set[Pair] = set()
        for _, e in edges:
            ra, rb = find(e[0]), find(e[1])
            if ra != rb:
                uf[ra] = rb
                tree.add(e)
        return tree if len(tree) == self.n - 1 else None

    def prune_edges(self) -> set[Pair]:
        """Drop active non-tree edges whose lower bound beats their cycle max.

        Such an edge loses every future cycle comparison (costs only
        decrease), so it can never re-enter any MST.  No-op until a
        spanning tree exists.
        """
        if not self.spans():
            return set()
        removed: set[Pair] = set()
        for e in sorted(self.active - self.tree):
            _, star_c = self.cycle_max_edge(e)
            if self.h[e] > star_c:
                self.active.discard(e)
                removed.add(e)
        return removed

    def update_probability(self, prior: dict[Pair, float]) -> dict[Pair, float]:
        """Sampling weights from the cost gaps still worth closing.

        Tree edges weigh their cost-above-lower-bound gap; active non-tree
        edges weigh their cost above the cycle maximum they would need to
        beat.  The two groups share total mass proportionally to their
        sizes.  Until a tree exists the prior distribution is kept, and if
        every gap has closed the mass falls back to uniform over the
        remaining active edges so paths keep tightening toward their bounds.
        """
        if not self.tree:
            return dict(prior)
        gap_mst = {}
        for e in sorted(self.tree):
            gap = float(self.cost[e] - self.h[e])
            if gap > 0.0:
                gap_mst[e] = gap
        gap_non = {}
        for e in sorted(self.active - self.tree):
            _, star_c = self.cycle_max_edge(e)
            gap = float(self.cost[e] - star_c)
            if gap > 0.0:
                gap_non[e] = gap
        n1, n2 = len(gap_mst), len(gap_non)
        if n1 == 0 and n2 == 0:
            pool = sorted(self.active) if self.active else sorted(self.tree)
            return {e: 1.0 / len(pool) for e in pool}
        table: dict[Pair, float] = {}
        if n1:
            w1 = n1 / (n1 + n2)
            s1 = sum(gap_mst.values())
            for e, gap in gap_mst.items():
                table[e] = w1 * gap / s1
        if n2:
            w2 = n2 / (n1 + n2)
            # an edge with no witnessed path yet has an infinite gap; in the
            # normalised limit such edges share the group mass uniformly and
            # finite gaps vanish against them
            unwitnessed = {e for e, gap in gap_non.items() if math.isinf(gap)}
            if unwitnessed:
                for e in gap_non:
                    table[e] = w2 / len(unwitnessed) if e in unwitnessed else 0.0
            else:
                s2 = sum(gap_non.values())
                for e, gap in gap_non.items():
                    table[e] = w2 * gap / s2
        return table

    def lower_bound_probability(self) -> dict[Pair, float]:
        """Initial distribution proportional to the Euclidean lower bounds."""
        pairs = sorted(self.active)
        total = float(sum(self.h[e] for e in pairs))
        return {e: float(self.h[e]) / total for e in pairs}
