"""Planner loops and path extraction.

IstStar interleaves informed batch sampling, incremental shortest-path
maintenance, MST upkeep and edge pruning.  Baseline densifies the same
roadmap structure with uniform samples and recomputes the terminal tree
from scratch each iteration (exact metric completion + Kruskal), so the
two planners are comparable at equal sample budgets.

A final multi-goal path comes from doubling the terminal tree: walk it
depth-first from the origin, taking the destination-ward branch last at
every step, then shortcut consecutive terminals through exact roadmap
shortest paths.  The walk construction keeps the classical guarantee
path cost <= 2 * tree weight.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from .informed import add_samples
from .oracle import kruskal, metric_completion
from .ripple import Forest, MeetRecord, ripple
from .roadmap import Roadmap
from .space import Env, PathSegment, is_state_valid, sample_uniform_free
from .terminal_graph import Pair, TerminalGraph, _pair


@dataclass
class PlannerParams:
    """Per-run knobs; the seed fully determines a run."""
    n_b: int
    seed: int
    n_s: int = 200
    eta: float = 1.1
    prune: bool = True

    def __post_init__(self):
        if self.n_s < 1 or self.n_b < 1:
            raise ValueError("n_s and n_b must be >= 1")
        if self.eta <= 1.0:
            raise ValueError("eta must be > 1")


@dataclass
class TraceRow:
    iteration: int
    samples_total: int
    edges_active: int
    edges_pruned_cum: int
    tree_cost: float
    path_cost: float
    wall_time_s: float


@dataclass
class MgpfPath:
    """A feasible multi-goal path realised on the roadmap."""
    visit_order: list[int]
    waypoints: np.ndarray
    cost: float

    def segments(self) -> list[PathSegment]:
        return [PathSegment(a, b)
                for a, b in zip(self.waypoints, self.waypoints[1:])]


def _check_terminals(env: Env, terminals) -> np.ndarray:
    pts = np.asarray(terminals, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("need at least two terminal configurations")
    for p in pts:
        if not is_state_valid(env, p):
            raise ValueError(f"terminal {p} is not a valid state")
    diff = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    if np.any(diff[~np.eye(len(pts), dtype=bool)] == 0.0):
        raise ValueError("terminals must be pairwise distinct")
    return pts


def _visit_order(tree: set[Pair], n: int, s: int, d: int) -> list[int]:
    """Terminal order from a d-last depth-first walk of the tree.

    At every node the child subtree containing d is explored last, and d
    itself is deferred to the very end; consecutive terminals then lie in
    walk order, which is what bounds the tour by twice the tree weight.
    """
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for u, v in tree:
        adj[u].append(v)
        adj[v].append(u)
    parent = {s: -1}
    stack = [s]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                stack.append(y)
    toward_d = {}
    x = d
    while parent[x] != -1:
        toward_d[parent[x]] = x
        x = parent[x]
    order = []
    stack = [s]
    seen = {s}
    while stack:
        x = stack.pop()
        order.append(x)
        children = sorted(y for y in adj[x] if y not in seen)
        seen.update(children)
        if x in toward_d and toward_d[x] in children:
            children.remove(toward_d[x])
            children.append(toward_d[x])
        stack.extend(reversed(children))
    order.remove(d)
    order.append(d)
    return order


def _tree_path_cost(tree: set[Pair], cost: np.ndarray, n: int,
                    u: int, v: int) -> float:
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for a, b in tree:
        adj[a].append(b)
        adj[b].append(a)
    prev = {u: -1}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                stack.append(y)
    total = 0.0
    x = v
    while x != u:
        total += float(cost[_pair(x, prev[x])])
        x = prev[x]
    return total


def tour_upper_bound(tree: set[Pair], cost: np.ndarray, n: int,
                     s: int, d: int) -> float:
    """Cost of the doubled-tree tour realised through tree-edge paths.

    Always at most twice the tree weight; reported per iteration as the
    anytime feasible path cost without touching the roadmap.
    """
    if len(tree) != n - 1:
        return math.inf
    order = _visit_order(tree, n, s, d)
    return float(sum(_tree_path_cost(tree, cost, n, a, b)
                     for a, b in zip(order, order[1:])))


class IstStar:
    """Informed Steiner tree planner over a growing roadmap."""

    def __init__(self, env: Env, terminals, params: PlannerParams):
        pts = _check_terminals(env, terminals)
        self.env = env
        self.params = params
        self.rm = Roadmap(env, eta=params.eta)
        for p in pts:
            self.rm.add_node(p)
        self.rm.num_terminals = len(pts)
        self.forest = Forest(len(pts))
        self.tg = TerminalGraph(pts)
        # a direct terminal-terminal edge is already a feasible path, and
        # the expansion loop never re-examines terminal pairs on its own
        for i in range(len(pts)):
            for j, w in self.rm.adj[i]:
                if j < len(pts) and i < j:
                    self.tg.cost[i, j] = w
                    self.tg.cost[j, i] = w
        self.prob = self.tg.lower_bound_probability()
        self.rng = np.random.default_rng(params.seed)
        self.meets: dict[Pair, MeetRecord] = {}
        self.trace: list[TraceRow] = []
        self._rotations: dict[Pair, np.ndarray] = {}
        self._initial_pairs = len(self.tg.active)
        self._t0 = None

    def step(self) -> TraceRow:
        """One batch: sample, ripple, retighten the tree, prune, reweigh."""
        if self._t0 is None:
            self._t0 = time.perf_counter()
        batch = add_samples(self.prob, self.tg, self.env, self.params.n_s,
                            self.rng, rotations=self._rotations)
        for rec in ripple(self.rm, self.forest, self.tg, batch):
            self.meets[(rec.terminal_a, rec.terminal_b)] = rec
        self.tg.update_tree()
        if self.params.prune:
            self.tg.prune_edges()
        self.prob = self.tg.update_probability(self.prob)
        row = TraceRow(
            iteration=len(self.trace) + 1,
            samples_total=(len(self.trace) + 1) * self.params.n_s,
            edges_active=len(self.tg.active),
            edges_pruned_cum=self._initial_pairs - len(self.tg.active),
            tree_cost=self.tg.tree_weight(),
            path_cost=tour_upper_bound(self.tg.tree, self.tg.cost, self.tg.n,
                                       self.tg.s, self.tg.d),
            wall_time_s=time.perf_counter() - self._t0,
        )
        self.trace.append(row)
        return row

    def run(self, observer=None) -> list[TraceRow]:
        for _ in range(self.params.n_b):
            row = self.step()
            if observer is not None:
                observer(row)
        return self.trace

    def extract_path(self) -> MgpfPath:
        return extract_path(self.tg, self.forest, self.rm)


class Baseline:
    """Uniform densification with a per-iteration batch Steiner tree.

    Matches IstStar's sample budget per iteration but applies no informed
    bias and no pruning; the tree is rebuilt from the exact metric
    completion each time.
    """

    def __init__(self, env: Env, terminals, params: PlannerParams):
        pts = _check_terminals(env, terminals)
        self.env = env
        self.params = params
        self.rm = Roadmap(env, eta=params.eta)
        for p in pts:
            self.rm.add_node(p)
        self.rm.num_terminals = len(pts)
        self.terminals = list(range(len(pts)))
        self.coords = pts
        self.rng = np.random.default_rng(params.seed)
        self.tree: set[Pair] = set()
        self.completion: np.ndarray | None = None
        self.trace: list[TraceRow] = []
        self._t0 = None

    def step(self) -> TraceRow:
        if self._t0 is None:
            self._t0 = time.perf_counter()
        for _ in range(self.params.n_s):
            self.rm.add_node(sample_uniform_free(self.env, self.rng))
        self.completion = metric_completion(self.rm, self.terminals)
        edges, weight = kruskal(self.completion)
        self.tree = set(edges) if edges is not None else set()
        n = len(self.terminals)
        if edges is not None:
            path_cost = tour_upper_bound(self.tree, self.completion, n,
                                         0, n - 1)
        else:
            path_cost = math.inf
        row = TraceRow(
            iteration=len(self.trace) + 1,
            samples_total=(len(self.trace) + 1) * self.params.n_s,
            edges_active=n * (n - 1) // 2,
            edges_pruned_cum=0,
            tree_cost=weight,
            path_cost=path_cost,
            wall_time_s=time.perf_counter() - self._t0,
        )
        self.trace.append(row)
        return row

    def run(self, observer=None) -> list[TraceRow]:
        for _ in range(self.params.n_b):
            row = self.step()
            if observer is not None:
                observer(row)
        return self.trace

    def extract_path(self) -> MgpfPath:
        if len(self.tree) != len(self.terminals) - 1:
            raise ValueError("terminal tree does not span")
        tg = TerminalGraph(self.coords)
        tg.cost = self.completion.copy()
        tg.tree = set(self.tree)
        return extract_path(tg, Forest(len(self.terminals)), self.rm)


def ist_star(env: Env, terminals, params: PlannerParams,
             observer=None) -> list[TraceRow]:
    """Run the informed planner for its full batch budget."""
    return IstStar(env, terminals, params).run(observer)


def baseline(env: Env, terminals, params: PlannerParams,
             observer=None) -> list[TraceRow]:
    """Run the uniform-sampling baseline at the same budget."""
    return Baseline(env, terminals, params).run(observer)


def extract_path(tg: TerminalGraph, forest: Forest, rm: Roadmap) -> MgpfPath:
    """Realise the terminal tree as a feasible origin-to-destination path.

    Visit order comes from the d-last tree walk; waypoints concatenate
    exact roadmap shortest paths between consecutive terminals, so the
    total cost never exceeds the doubled tree weight.  Terminals are
    assumed to occupy roadmap ids 0..|T|-1, with their forest roots being
    themselves.
    """
    if not tg.spans():
        raise ValueError("terminal tree does not span")
    for i in range(min(tg.n, forest.num_terminals)):
        if forest.root[i] != i:
            raise ValueError("terminal forest roots are inconsistent")
    order = _visit_order(tg.tree, tg.n, tg.s, tg.d)
    graph = rm.csr_graph()
    coords = rm.coords()
    waypoints = [coords[order[0]]]
    cost = 0.0
    for a, b in zip(order, order[1:]):
        dist, pred = _sp_dijkstra(graph, directed=False, indices=a,
                                  return_predecessors=True)
        if not math.isfinite(dist[b]):
            raise ValueError(f"terminals {a} and {b} are disconnected")
        chain = [b]
        x = b
        while x != a:
            x = int(pred[x])
            chain.append(x)
        chain.reverse()
        for u, v in zip(chain, chain[1:]):
            cost += float(np.linalg.norm(coords[v] - coords[u]))
            waypoints.append(coords[v])
    return MgpfPath(visit_order=order, waypoints=np.array(waypoints),
                    cost=cost)
