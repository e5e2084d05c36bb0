"""Configuration spaces: the unit hypercube with axis-aligned box obstacles.

States are plain numpy vectors in [0, 1]^dim.  Obstacles are closed boxes,
so a state on an obstacle face is invalid; this keeps zero-measure corridors
along obstacle boundaries out of the free space.
"""

from __future__ import annotations

import math

import numpy as np

SAMPLING_BUDGET = 10**6

Config = np.ndarray


class SamplingError(RuntimeError):
    """Raised when rejection sampling exhausts its attempt budget."""


class PathSegment:
    """A straight piece of a path; its cost is the Euclidean length."""

    def __init__(self, a: Config, b: Config):
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.length = float(np.linalg.norm(self.b - self.a))

    def __repr__(self):
        return f"PathSegment({self.a} -> {self.b}, length={self.length:.6g})"


class Env:
    """An n-dimensional unit-cube world with box obstacles.

    ``kind`` selects a fast analytic validity kernel for the built-in
    worlds ("co", "uh"); "boxes" falls back to checking every box.
    The obstacle list of a "uh" world is materialised lazily because it
    holds 10^dim boxes.
    """

    def __init__(self, dim, kind, free_measure, collision_resolution=1e-4,
                 boxes=None):
        if dim < 2:
            raise ValueError(f"dimension must be >= 2, got {dim}")
        if not 0.0 < free_measure <= 1.0:
            raise ValueError(f"free_measure must be in (0, 1], got {free_measure}")
        if collision_resolution <= 0.0:
            raise ValueError("collision_resolution must be positive")
        self.dim = int(dim)
        self.kind = kind
        self.free_measure = float(free_measure)
        self.collision_resolution = float(collision_resolution)
        self._boxes = boxes

    @property
    def obstacles(self) -> np.ndarray:
        """Obstacle boxes, shape (k, dim, 2) of per-axis [lo, hi]."""
        if self._boxes is None and self.kind == "uh":
            self._boxes = _uh_boxes(self.dim)
        if self._boxes is None:
            self._boxes = np.empty((0, self.dim, 2))
        return self._boxes

    def __repr__(self):
        return f"Env(kind={self.kind!r}, dim={self.dim}, free_measure={self.free_measure:.6g})"


def _uh_boxes(dim: int) -> np.ndarray:
    lo_1d = 0.1 * np.arange(10) + 0.0125
    grids = np.meshgrid(*([lo_1d] * dim), indexing="ij")
    lo = np.stack([g.ravel() for g in grids], axis=1)
    return np.stack([lo, lo + 0.075], axis=2)


def make_center_obstacle(dim: int) -> Env:
    """One closed box of side 0.9 centred in the unit cube."""
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    box = np.tile(np.array([[0.05, 0.95]]), (dim, 1))[None, :, :]
    return Env(dim, "co", free_measure=1.0 - 0.9**dim, boxes=box)


def make_uniform_hypercubes(dim: int) -> Env:
    """10^dim boxes of side 0.075 on a period-0.1 grid.

    The 0.025 gap is split symmetrically across cell boundaries, so
    corridors of equal width run between obstacles and along the domain
    boundary.
    """
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    return Env(dim, "uh", free_measure=1.0 - 0.75**dim)


def make_box_env(dim: int, boxes, collision_resolution: float = 1e-4) -> Env:
    """Custom world from an explicit list of per-axis [lo, hi] intervals.

    The free measure is exact for pairwise-disjoint boxes; overlapping
    boxes fall back to a fixed-seed Monte Carlo estimate (10^6 points),
    which is only ever consumed by the connection-radius formula.
    """
    arr = np.asarray(boxes, dtype=float).reshape((-1, dim, 2))
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ValueError("obstacle boxes must lie inside the unit cube")
    if arr.size and np.any(arr[:, :, 0] > arr[:, :, 1]):
        raise ValueError("box intervals must satisfy lo <= hi")
    if _boxes_disjoint(arr):
        mu = 1.0 - float(np.prod(arr[:, :, 1] - arr[:, :, 0], axis=1).sum())
    else:
        rng = np.random.default_rng(0)
        pts = rng.random((SAMPLING_BUDGET, dim))
        mu = float(np.mean(~_inside_boxes(pts, arr)))
    return Env(dim, "boxes", free_measure=mu,
               collision_resolution=collision_resolution, boxes=arr)


def _boxes_disjoint(boxes: np.ndarray) -> bool:
    k = boxes.shape[0]
    for i in range(k):
        for j in range(i + 1, k):
            if np.all((boxes[i, :, 0] <= boxes[j, :, 1])
                      & (boxes[j, :, 0] <= boxes[i, :, 1])):
                return False
    return True


def _inside_boxes(pts: np.ndarray, boxes: np.ndarray) -> np.ndarray:
    if boxes.shape[0] == 0:
        return np.zeros(pts.shape[0], dtype=bool)
    inside = (pts[:, None, :] >= boxes[None, :, :, 0]) \
        & (pts[:, None, :] <= boxes[None, :, :, 1])
    return inside.all(axis=2).any(axis=1)


def _obstructed(env: Env, pts: np.ndarray) -> np.ndarray:
    """Which states touch an obstacle (closed boxes, boundary included)."""
    if env.kind == "co":
        return ((pts >= 0.05) & (pts <= 0.95)).all(axis=1)
    if env.kind == "uh":
        # grid period 0.1 with the obstacle at [k/10 + 0.0125, k/10 + 0.0875];
        # scaled by 10 the thresholds 0.125 and 0.875 are exact binary floats
        y = pts * 10.0
        frac = y - np.clip(np.floor(y), 0, 9)
        return ((frac >= 0.125) & (frac <= 0.875)).all(axis=1)
    return _inside_boxes(pts, env.obstacles)


def valid_mask(env: Env, pts: np.ndarray) -> np.ndarray:
    """Vectorised state validity for an array of states, shape (m, dim)."""
    pts = np.atleast_2d(pts)
    ok = ((pts >= 0.0) & (pts <= 1.0)).all(axis=1)
    return ok & ~_obstructed(env, pts)


def _check_dim(env: Env, x: Config):
    x = np.asarray(x, dtype=float)
    if x.shape != (env.dim,):
        raise ValueError(f"state has shape {x.shape}, expected ({env.dim},)")
    return x


def is_state_valid(env: Env, x: Config) -> bool:
    """True iff x lies in [0,1]^dim and strictly outside every obstacle."""
    x = _check_dim(env, x)
    return bool(valid_mask(env, x[None, :])[0])


def heuristic(a: Config, b: Config) -> float:
    """Euclidean distance; the lower bound used throughout."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(b - a))


def _segment_points(a: np.ndarray, b: np.ndarray, resolution: float):
    """States at i/m along the segment, m = ceil(|b-a| / resolution).

    The weights (m-i)/m and i/m are the same float values for the swapped
    endpoint order, so the evaluated point set is bit-identical in both
    directions and motion checks are exactly symmetric.
    """
    m = max(int(math.ceil(np.linalg.norm(b - a) / resolution)), 1)
    i = np.arange(m + 1, dtype=float)
    w2 = i / m
    w1 = (m - i) / m
    return a[None, :] * w1[:, None] + b[None, :] * w2[:, None]


def is_motion_valid(env: Env, a: Config, b: Config) -> bool:
    """Discretised straight-line check at the env's collision resolution.

    Interpolated states are evaluated from both ends inward alternately
    (in chunks) so a blocked segment is usually rejected early.
    """
    a = _check_dim(env, a)
    b = _check_dim(env, b)
    if not is_state_valid(env, a) or not is_state_valid(env, b):
        raise ValueError("motion check requires valid endpoints")
    if env.kind == "boxes" and env.obstacles.shape[0] == 0:
        return True
    pts = _segment_points(a, b, env.collision_resolution)
    m = pts.shape[0] - 1
    idx = np.arange(m + 1)
    order = np.where(idx % 2 == 0, idx // 2, m - idx // 2)
    # interior states stay inside the unit cube by convexity, so only the
    # obstacle test matters here
    for lo in range(0, m + 1, 256):
        if _obstructed(env, pts[order[lo:lo + 256]]).any():
            return False
    return True


def motion_valid_batch(env: Env, a: Config, targets: np.ndarray,
                       dists: np.ndarray | None = None) -> np.ndarray:
    """Straight-line checks from a to each row of targets, in one pass.

    Decides exactly the same predicate as is_motion_valid on every
    segment; used by the roadmap when wiring a new node to its
    neighbours.  The built-in worlds are classified by interval
    arithmetic on the discretisation grid instead of evaluating every
    interpolated state.
    """
    k = targets.shape[0]
    if k == 0:
        return np.zeros(0, dtype=bool)
    if dists is None:
        dists = np.linalg.norm(targets - a, axis=1)
    ms = np.maximum(np.ceil(dists / env.collision_resolution).astype(np.int64), 1)
    if env.kind in ("co", "uh"):
        return _segments_clear_grid(env, a, targets, ms)
    if env.obstacles.shape[0] == 0:
        return np.ones(k, dtype=bool)
    counts = ms + 1
    offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
    seg = np.repeat(np.arange(k), counts)
    i = (np.arange(counts.sum()) - offsets[seg]).astype(float)
    mseg = ms[seg].astype(float)
    w2 = i / mseg
    w1 = (mseg - i) / mseg
    pts = a[None, :] * w1[:, None] + targets[seg] * w2[:, None]
    return ~np.logical_or.reduceat(_obstructed(env, pts), offsets)


# -- interval classification of discretised segments ----------------------
#
# A grid point i of segment a -> b lies inside a box iff i/m falls in the
# intersection of the per-axis parameter intervals where the coordinate is
# inside the box's band.  Those intervals are O(dim) to compute, so whole
# segments are classified without touching their ~dist/resolution states.
# A safety margin _DELTA covers float rounding of the evaluated states:
# indices clearly inside the shrunk intervals are definite hits, indices
# clearly outside the grown intervals are definitely free, and only the
# remaining boundary window is settled by evaluating the actual states.

_DELTA = 1e-12
_SLOPE_MIN = 1e-9


def _window_obstructed(env: Env, a, b, m: int, lo_i: int, hi_i: int) -> bool:
    i = np.arange(lo_i, hi_i + 1, dtype=float)
    w2 = i / m
    w1 = (m - i) / m
    pts = a[None, :] * w1[:, None] + b[None, :] * w2[:, None]
    return bool(_obstructed(env, pts).any())


def _axis_band_intervals(av, sv, band_lo, band_hi):
    """Per-axis parameter intervals (outer, inner) for one obstacle band."""
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = (band_lo - av) / sv
        t2 = (band_hi - av) / sv
        eps = _DELTA / np.abs(sv)
    tlo = np.minimum(t1, t2)
    thi = np.maximum(t1, t2)
    const = np.abs(sv) < _SLOPE_MIN
    if np.any(const):
        # a constant coordinate is in band, out of band, or too close to
        # call; the last case is resolved by evaluating the whole segment
        const_in = const & (av >= band_lo + _DELTA) & (av <= band_hi - _DELTA)
        const_out = const & ((av <= band_lo - _DELTA) | (av >= band_hi + _DELTA))
        tlo = np.where(const_in, -np.inf, tlo)
        thi = np.where(const_in, np.inf, thi)
        tlo = np.where(const_out, np.inf, tlo)
        thi = np.where(const_out, -np.inf, thi)
        eps = np.where(const, 0.0, eps)
        unresolved = const & ~const_in & ~const_out
    else:
        unresolved = np.zeros(av.shape, dtype=bool)
    return tlo, thi, eps, unresolved


def _classify_boxes(tlo, thi, eps, ms):
    """Hit/free/ambiguous flags for box parameter intervals along segments.

    tlo/thi/eps carry the per-axis interval bounds in their last dimension
    (one row of boxes per segment); the margin is applied per axis before
    reducing, so the inner interval under-approximates the true box window
    and the outer one over-approximates it.
    """
    inner_lo = np.maximum((tlo + eps).max(axis=-1), 0.0)
    inner_hi = np.minimum((thi - eps).min(axis=-1), 1.0)
    outer_lo = np.maximum((tlo - eps).max(axis=-1), 0.0)
    outer_hi = np.minimum((thi + eps).min(axis=-1), 1.0)
    mf = ms.astype(float)
    while mf.ndim < inner_lo.ndim:
        mf = mf[..., None]
    hit = (inner_lo <= inner_hi) \
        & (np.ceil(inner_lo * mf) <= np.floor(inner_hi * mf))
    lo_i = np.ceil(outer_lo * mf)
    hi_i = np.floor(outer_hi * mf)
    nonempty = (outer_lo <= outer_hi) & (lo_i <= hi_i)
    window = nonempty & ~hit
    return hit, window, lo_i, hi_i


def _segments_clear_grid(env: Env, a, targets, ms) -> np.ndarray:
    k, dim = targets.shape
    s = targets - a
    av = np.broadcast_to(a, (k, dim))
    if env.kind == "co":
        tlo, thi, eps, unresolved = _axis_band_intervals(av, s, 0.05, 0.95)
        hit, window, lo_i, hi_i = _classify_boxes(tlo, thi, eps, ms)
        hit, window = hit[:, None], window[:, None]
        lo_i, hi_i = lo_i[:, None], hi_i[:, None]
        unresolved = unresolved.any(axis=1)
    else:
        # cell c of the period-0.1 grid occupies [(c + 0.125)/10, (c + 0.875)/10]
        mn = np.minimum(av, av + s) * 10.0
        mx = np.maximum(av, av + s) * 10.0
        c_lo = np.maximum(np.ceil(mn - 0.875 - _DELTA), 0.0)
        c_hi = np.minimum(np.floor(mx - 0.125 + _DELTA), 9.0)
        width = max(int((c_hi - c_lo).max(initial=0.0)) + 1, 1)
        offs = np.arange(width)
        cells = c_lo[:, :, None] + offs[None, None, :]
        dead = cells > c_hi[:, :, None]
        tlo, thi, eps, unresolved = _axis_band_intervals(
            np.broadcast_to(av[:, :, None], cells.shape),
            np.broadcast_to(s[:, :, None], cells.shape),
            (cells + 0.125) / 10.0, (cells + 0.875) / 10.0)
        tlo = np.where(dead, np.inf, tlo)
        thi = np.where(dead, -np.inf, thi)
        unresolved = (unresolved & ~dead).any(axis=(1, 2))
        # every combination of per-axis cells is a candidate box
        grids = np.meshgrid(*([offs] * dim), indexing="ij")
        combo = np.stack([g.ravel() for g in grids], axis=1)
        ax = np.arange(dim)
        g_tlo = tlo[:, ax[None, :], combo]
        g_thi = thi[:, ax[None, :], combo]
        g_eps = eps[:, ax[None, :], combo]
        hit, window, lo_i, hi_i = _classify_boxes(g_tlo, g_thi, g_eps,
                                                  ms[:, None])
    valid = ~hit.any(axis=1)
    # interval data is unreliable wherever an axis was too close to call,
    # so those whole segments are settled by evaluation
    for e in np.flatnonzero(unresolved):
        valid[e] = not _window_obstructed(env, a, targets[e], int(ms[e]),
                                          0, int(ms[e]))
    pending = valid & ~unresolved & window.any(axis=1)
    for e in np.flatnonzero(pending):
        m = int(ms[e])
        for box in np.flatnonzero(window[e]):
            lo = max(int(lo_i[e, box]) - 2, 0)
            hi = min(int(hi_i[e, box]) + 2, m)
            if lo <= hi and _window_obstructed(env, a, targets[e], m, lo, hi):
                valid[e] = False
                break
    return valid


def sample_uniform_free(env: Env, rng: np.random.Generator) -> Config:
    """A state drawn uniformly from the free space by rejection."""
    attempts = 0
    block = 16
    while attempts < SAMPLING_BUDGET:
        pts = rng.random((block, env.dim))
        ok = valid_mask(env, pts)
        hits = np.flatnonzero(ok)
        if hits.size:
            return pts[hits[0]].copy()
        attempts += block
        block = min(block * 2, 4096)
    raise SamplingError(f"no valid sample in {SAMPLING_BUDGET} attempts")
