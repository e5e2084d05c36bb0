"""The sampled roadmap G = (V, E).

Nodes get dense ids in insertion order; terminals always occupy 0..|T|-1.
Edges are straight-line, collision-checked at insertion time, and their
cost is the Euclidean length.  The neighbour radius shrinks with the node
count; edges created under an earlier, larger radius are kept, since a
superset of the radius graph can only preserve or improve shortest paths.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.sparse import csr_matrix

from .space import Config, Env, heuristic, is_state_valid, motion_valid_batch


def unit_ball_volume(dim: int) -> float:
    return math.pi ** (dim / 2.0) / math.gamma(dim / 2.0 + 1.0)


def connection_radius(q: int, dim: int, free_measure: float,
                      eta: float = 1.1) -> float:
    """Shrinking neighbour radius for a roadmap with q nodes.

    rho(q) = eta * (2 (1 + 1/d) (mu / zeta_d) (ln q / q))^(1/d), with mu the
    free-space measure and zeta_d the unit d-ball volume.
    """
    if q < 2:
        raise ValueError(f"radius needs q >= 2 nodes, got {q}")
    base = 2.0 * (1.0 + 1.0 / dim) * (free_measure / unit_ball_volume(dim)) \
        * (math.log(q) / q)
    return eta * base ** (1.0 / dim)


class Roadmap:
    """Growable geometric graph over an environment's free space.

    ``radius_override`` pins the connection radius to a constant, which is
    handy when a test needs a hand-built adjacency.
    """

    def __init__(self, env: Env, eta: float = 1.1, radius_override=None):
        if eta <= 1.0:
            raise ValueError(f"eta must be > 1, got {eta}")
        self.env = env
        self.eta = float(eta)
        self.radius_override = radius_override
        self.num_terminals = 0
        self._coords = np.empty((64, env.dim))
        self._n = 0
        self.adj: list[list[tuple[int, float]]] = []
        self._eu: list[int] = []
        self._ev: list[int] = []
        self._ew: list[float] = []
        self._csr = None

    @property
    def num_nodes(self) -> int:
        return self._n

    @property
    def num_edges(self) -> int:
        return len(self._eu)

    def coords(self) -> np.ndarray:
        """View of all node configurations, shape (n, dim)."""
        return self._coords[:self._n]

    def config(self, node_id: int) -> Config:
        self._check_id(node_id)
        return self._coords[node_id].copy()

    def current_radius(self) -> float:
        if self.radius_override is not None:
            return float(self.radius_override)
        return connection_radius(max(self._n, 2), self.env.dim,
                                 self.env.free_measure, self.eta)

    def add_node(self, x: Config):
        """Insert a valid state and wire it to in-radius, visible neighbours.

        Returns (node_id, [(node_id, neighbour_id, cost), ...]) for the
        edges created.
        """
        x = np.asarray(x, dtype=float)
        if not is_state_valid(self.env, x):
            raise ValueError(f"cannot add invalid state {x}")
        if self._n == self._coords.shape[0]:
            grown = np.empty((2 * self._n, self.env.dim))
            grown[:self._n] = self._coords
            self._coords = grown
        nid = self._n
        self._coords[nid] = x
        self._n += 1
        self.adj.append([])
        if nid == 0:
            return nid, []
        rho = self.current_radius()
        d = np.linalg.norm(self.coords()[:nid] - x, axis=1)
        cand = np.flatnonzero(d <= rho)
        if cand.size == 0:
            return nid, []
        ok = motion_valid_batch(self.env, x, self._coords[cand], dists=d[cand])
        hit = cand[ok]
        ids = hit.tolist()
        costs = d[hit].tolist()
        created = []
        adj_new = self.adj[nid]
        for j, w in zip(ids, costs):
            adj_new.append((j, w))
            self.adj[j].append((nid, w))
            created.append((nid, j, w))
        self._eu.extend([nid] * len(ids))
        self._ev.extend(ids)
        self._ew.extend(costs)
        self._csr = None
        return nid, created

    def neighbors(self, node_id: int) -> list[tuple[int, float]]:
        """Stored adjacency of a node: (neighbour id, edge cost) pairs."""
        self._check_id(node_id)
        return list(self.adj[node_id])

    def csr_graph(self) -> csr_matrix:
        """Symmetric sparse adjacency for batch shortest-path queries."""
        if self._csr is None:
            u = np.array(self._eu + self._ev, dtype=np.int32)
            v = np.array(self._ev + self._eu, dtype=np.int32)
            w = np.array(self._ew + self._ew, dtype=float)
            self._csr = csr_matrix((w, (u, v)), shape=(self._n, self._n))
        return self._csr

    def _check_id(self, node_id: int):
        if not 0 <= node_id < self._n:
            raise KeyError(f"unknown node id {node_id}")

    def edge_arrays(self):
        """One direction of every edge as (u, v, w) numpy arrays."""
        return (np.array(self._eu, dtype=np.int64),
                np.array(self._ev, dtype=np.int64),
                np.array(self._ew, dtype=float))

    def recheck_edges(self) -> bool:
        """Re-validate every stored edge's cost and motion feasibility."""
        from .space import is_motion_valid
        for u, v, w in zip(self._eu, self._ev, self._ew):
            a, b = self._coords[u], self._coords[v]
            if abs(heuristic(a, b) - w) > 1e-12:
                return False
            if not is_motion_valid(self.env, a, b):
                return False
        return True
