"""Direct sampling of informed sets (prolate hyperspheroids).

Given foci a, b and a current best path cost c_best, every point that
could shorten the path lies in the ellipsoid |x-a| + |x-b| <= c_best.
Points are drawn by mapping the uniform unit ball through a stretch
aligned with the focal axis; an unbounded informed set (c_best = inf)
degenerates to uniform free-space sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .space import (Config, Env, SAMPLING_BUDGET, SamplingError, heuristic,
                    sample_uniform_free, valid_mask)

# Below this gap the conjugate radius is treated as zero (segment sampling).
_DEGENERATE_GAP = 1e-12


@dataclass
class InformedSet:
    """Ellipsoid of states that can beat cost c_best between two foci."""
    focus_a: Config
    focus_b: Config
    c_best: float
    c_min: float = field(init=False)

    def __post_init__(self):
        self.focus_a = np.asarray(self.focus_a, dtype=float)
        self.focus_b = np.asarray(self.focus_b, dtype=float)
        self.c_min = heuristic(self.focus_a, self.focus_b)
        if math.isfinite(self.c_best) and self.c_best < self.c_min - 1e-9:
            raise ValueError(
                f"c_best={self.c_best} undercuts the Euclidean bound {self.c_min}")


@dataclass
class SampleBatch:
    """An ordered batch of valid configurations produced per iteration."""
    points: np.ndarray

    @property
    def size(self) -> int:
        return len(self.points)


def rotation_to_world(a: Config, b: Config) -> np.ndarray:
    """Orthogonal map C with C e1 = (b-a)/|b-a| and det(C) = +1.

    A single Householder reflection takes e1 to the focal axis; negating
    the last column restores a positive determinant.  Any orthogonal map
    with this first column induces the same uniform ellipsoid samples.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    dim = a.shape[0]
    axis = b - a
    norm = np.linalg.norm(axis)
    if norm == 0.0:
        raise ValueError("degenerate foci: a == b")
    axis = axis / norm
    e1 = np.zeros(dim)
    e1[0] = 1.0
    v = e1 - axis
    vn = np.dot(v, v)
    if vn < 1e-30:
        return np.eye(dim)
    c = np.eye(dim) - 2.0 * np.outer(v, v) / vn
    c[:, -1] = -c[:, -1]
    return c


def _ball_points(rng: np.random.Generator, k: int, dim: int) -> np.ndarray:
    x = rng.standard_normal((k, dim))
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    r = rng.random((k, 1)) ** (1.0 / dim)
    return r * x / norms


def sample_informed(iset: InformedSet, env: Env, rng: np.random.Generator,
                    rotation: np.ndarray | None = None) -> Config:
    """A valid state from the informed set, uniform over set and free space.

    Candidates outside the unit cube or in collision are rejected rather
    than clamped, which preserves uniformity over (informed set) & X_f.
    """
    if not math.isfinite(iset.c_best):
        return sample_uniform_free(env, rng)
    dim = env.dim
    if rotation is None:
        rotation = rotation_to_world(iset.focus_a, iset.focus_b)
    c_best = max(iset.c_best, iset.c_min)
    gap = c_best * c_best - iset.c_min * iset.c_min
    r_conj = 0.0 if gap <= _DEGENERATE_GAP else math.sqrt(gap) / 2.0
    radii = np.full(dim, r_conj)
    radii[0] = c_best / 2.0
    centre = (iset.focus_a + iset.focus_b) / 2.0
    attempts = 0
    block = 8
    while attempts < SAMPLING_BUDGET:
        pts = centre + (_ball_points(rng, block, dim) * radii) @ rotation.T
        ok = valid_mask(env, pts)
        hits = np.flatnonzero(ok)
        if hits.size:
            return pts[hits[0]].copy()
        attempts += block
        block = min(block * 2, 4096)
    raise SamplingError(
        f"informed set around cost {iset.c_best:.6g} produced no valid "
        f"sample in {SAMPLING_BUDGET} attempts")


def add_samples(prob: dict, tg, env: Env, n_s: int, rng: np.random.Generator,
                rotations: dict | None = None) -> SampleBatch:
    """Draw a batch of n_s valid states from the active edges' informed sets.

    Each sample picks an active terminal pair by inverse CDF over the
    probability table, then samples that pair's informed set at the pair's
    current cost.
    """
    if n_s < 1:
        raise ValueError(f"batch size must be >= 1, got {n_s}")
    if not prob:
        raise ValueError("no active edges to sample")
    pairs = sorted(prob)
    cdf = np.cumsum([prob[p] for p in pairs])
    total = cdf[-1]
    if not math.isclose(total, 1.0, abs_tol=1e-6):
        raise ValueError(f"probability table sums to {total}, expected 1")
    if rotations is None:
        rotations = {}
    points = np.empty((n_s, env.dim))
    for i in range(n_s):
        k = int(np.searchsorted(cdf, rng.random() * total, side="right"))
        k = min(k, len(pairs) - 1)
        u, v = pairs[k]
        if (u, v) not in rotations:
            rotations[(u, v)] = rotation_to_world(tg.coords[u], tg.coords[v])
        iset = InformedSet(tg.coords[u], tg.coords[v], float(tg.cost[u, v]))
        points[i] = sample_informed(iset, env, rng, rotations[(u, v)])
    return SampleBatch(points)
