"""Benchmark harness: instance configs, CSV traces and run comparison.

A problem instance is a JSON document with top-level keys env, terminals,
planner and params.  Reruns of the same config produce byte-identical CSV;
measured wall times are therefore kept out of the file unless explicitly
requested, while in-memory traces always carry them.
"""

from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .planner import Baseline, IstStar, PlannerParams
from .space import (Env, SamplingError, make_box_env, make_center_obstacle,
                    make_uniform_hypercubes, sample_uniform_free)

CSV_HEADER = ("iteration,samples_total,edges_active,edges_pruned_cum,"
              "tree_cost,path_cost,wall_time_s")
TERMINAL_SEPARATION = 1e-3
GENERATION_BUDGET = 10**6
Z_99 = 2.576


class ConfigError(ValueError):
    """Raised for malformed or inconsistent instance configurations."""


@dataclass
class InstanceConfig:
    env_kind: str
    dim: int
    boxes: list | None
    terminal_coords: list | None
    terminal_count: int | None
    terminal_seed: int | None
    planner: str
    params: PlannerParams

    def build_env(self) -> Env:
        if self.env_kind == "co":
            return make_center_obstacle(self.dim)
        if self.env_kind == "uh":
            return make_uniform_hypercubes(self.dim)
        return make_box_env(self.dim, self.boxes or [])

    def build_terminals(self, env: Env) -> np.ndarray:
        if self.terminal_coords is not None:
            return np.asarray(self.terminal_coords, dtype=float)
        return generate_terminals(env, self.terminal_count, self.terminal_seed)

    def build_planner(self, env: Env, terminals):
        cls = IstStar if self.planner == "ist" else Baseline
        return cls(env, terminals, self.params)


def _require_keys(obj: dict, where: str, required: set, optional: set = frozenset()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object")
    unknown = set(obj) - required - optional
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ConfigError(f"missing keys in {where}: {sorted(missing)}")


def parse_config(doc) -> InstanceConfig:
    """Validate a config document (dict, JSON text or file path)."""
    if isinstance(doc, (str, os.PathLike)) and os.path.exists(doc):
        with open(doc) as fh:
            doc = json.load(fh)
    elif isinstance(doc, str):
        doc = json.loads(doc)
    _require_keys(doc, "config", {"env", "terminals", "planner", "params"})

    env = doc["env"]
    _require_keys(env, "env", {"kind", "dim"}, {"boxes"})
    kind = env["kind"]
    if kind not in ("co", "uh", "boxes"):
        raise ConfigError(f"env.kind must be co, uh or boxes, got {kind!r}")
    if kind != "boxes" and "boxes" in env:
        raise ConfigError("env.boxes is only valid for kind 'boxes'")
    dim = env["dim"]
    if not isinstance(dim, int) or dim < 2:
        raise ConfigError(f"env.dim must be an integer >= 2, got {dim!r}")

    term = doc["terminals"]
    coords = count = tseed = None
    if isinstance(term, dict) and "coords" in term:
        _require_keys(term, "terminals", {"coords"})
        coords = term["coords"]
        if len(coords) < 2 or len(coords) > 64:
            raise ConfigError("terminal count must be in 2..64")
    else:
        _require_keys(term, "terminals", {"count", "seed"})
        count, tseed = term["count"], term["seed"]
        if not 2 <= count <= 64:
            raise ConfigError("terminal count must be in 2..64")

    planner = doc["planner"]
    if planner not in ("ist", "baseline"):
        raise ConfigError(f"planner must be 'ist' or 'baseline', got {planner!r}")

    params = doc["params"]
    _require_keys(params, "params", {"n_b", "seed"}, {"n_s", "eta", "prune"})
    try:
        pp = PlannerParams(n_b=params["n_b"], seed=params["seed"],
                           n_s=params.get("n_s", 200),
                           eta=params.get("eta", 1.1),
                           prune=params.get("prune", True))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return InstanceConfig(env_kind=kind, dim=dim, boxes=env.get("boxes"),
                          terminal_coords=coords, terminal_count=count,
                          terminal_seed=tseed, planner=planner, params=pp)


def generate_terminals(env: Env, count: int, seed: int) -> np.ndarray:
    """Rejection-sample valid, well-separated terminal configurations."""
    if count < 2:
        raise ValueError(f"need at least two terminals, got {count}")
    rng = np.random.default_rng(seed)
    picked: list[np.ndarray] = []
    attempts = 0
    while len(picked) < count:
        if attempts >= GENERATION_BUDGET:
            raise SamplingError(
                f"could not place {count} separated terminals in "
                f"{GENERATION_BUDGET} attempts")
        cand = sample_uniform_free(env, rng)
        attempts += 1
        if all(np.linalg.norm(cand - p) >= TERMINAL_SEPARATION for p in picked):
            picked.append(cand)
    return np.array(picked)


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


def _row_line(row, timings: bool) -> str:
    wall = row.wall_time_s if timings else 0.0
    return (f"{row.iteration},{row.samples_total},{row.edges_active},"
            f"{row.edges_pruned_cum},{_fmt(row.tree_cost)},"
            f"{_fmt(row.path_cost)},{_fmt(wall)}")


def run_instance(cfg: InstanceConfig, out, timings: bool = False) -> int:
    """Execute one planner run, streaming the trace as CSV rows.

    The footer records the final tree cost, the extracted path cost and
    the cumulative pruning fraction.  Returns 0 on success; planner errors
    propagate to the caller.
    """
    close = False
    if isinstance(out, (str, os.PathLike)):
        out = open(out, "w")
        close = True
    try:
        env = cfg.build_env()
        terminals = cfg.build_terminals(env)
        planner = cfg.build_planner(env, terminals)
        out.write(CSV_HEADER + "\n")
        planner.run(observer=lambda row: out.write(_row_line(row, timings) + "\n"))
        last = planner.trace[-1]
        try:
            path_cost = planner.extract_path().cost
        except ValueError:
            path_cost = math.inf
        n = len(terminals)
        frac = last.edges_pruned_cum / (n * (n - 1) // 2)
        out.write(f"# final_tree_cost={_fmt(last.tree_cost)}\n")
        out.write(f"# final_path_cost={_fmt(path_cost)}\n")
        out.write(f"# pruned_fraction={_fmt(frac)}\n")
    finally:
        if close:
            out.close()
    return 0


def run_instance_to_string(cfg: InstanceConfig, timings: bool = False) -> str:
    buf = io.StringIO()
    run_instance(cfg, buf, timings=timings)
    return buf.getvalue()


def read_trace(path) -> tuple[list[dict], dict]:
    """Parse a trace CSV back into rows and its footer values."""
    rows = []
    footer = {}
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected trace header in {path}: {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, val = line.lstrip("# ").split("=", 1)
                footer[key] = float(val)
                continue
            parts = line.split(",")
            rows.append({
                "iteration": int(parts[0]),
                "samples_total": int(parts[1]),
                "edges_active": int(parts[2]),
                "edges_pruned_cum": int(parts[3]),
                "tree_cost": float(parts[4]),
                "path_cost": float(parts[5]),
                "wall_time_s": float(parts[6]),
            })
    return rows, footer


def read_trace_dir(path) -> list[list[dict]]:
    files = sorted(f for f in os.listdir(path) if f.endswith(".csv"))
    return [read_trace(os.path.join(path, f))[0] for f in files]


def _mean_ci(values: np.ndarray) -> tuple[float, float, float]:
    if not np.all(np.isfinite(values)):
        return math.inf, math.inf, math.inf
    mean = float(values.mean())
    half = Z_99 * float(values.std(ddof=1)) / math.sqrt(len(values))
    return mean, mean - half, mean + half


def compare(traces_a: list[list[dict]], traces_b: list[list[dict]]):
    """Per-iteration mean and 99% interval of tree cost for two run sets.

    Returns (rows, final_cost_ratio) where the ratio divides the mean
    final tree cost of set A by set B.
    """
    if len(traces_a) < 2 or len(traces_b) < 2:
        raise ValueError("compare needs at least two runs per planner")
    lengths = {len(t) for t in traces_a} | {len(t) for t in traces_b}
    if len(lengths) != 1:
        raise ValueError(f"mismatched trace lengths: {sorted(lengths)}")
    iters = lengths.pop()
    rows = []
    for i in range(iters):
        a = np.array([t[i]["tree_cost"] for t in traces_a])
        b = np.array([t[i]["tree_cost"] for t in traces_b])
        rows.append((i + 1, *_mean_ci(a), *_mean_ci(b)))
    ratio = rows[-1][1] / rows[-1][4]
    return rows, ratio


def write_comparison(rows, ratio, out):
    close = False
    if isinstance(out, (str, os.PathLike)):
        out = open(out, "w")
        close = True
    try:
        out.write("iteration,mean_a,ci_lo_a,ci_hi_a,mean_b,ci_lo_b,ci_hi_b\n")
        for row in rows:
            out.write(",".join([str(row[0])] + [_fmt(float(x)) for x in row[1:]])
                      + "\n")
        out.write(f"# final_cost_ratio={_fmt(float(ratio))}\n")
    finally:
        if close:
            out.close()


def compare_dirs(dir_a, dir_b, out):
    rows, ratio = compare(read_trace_dir(dir_a), read_trace_dir(dir_b))
    write_comparison(rows, ratio, out)
    return ratio


def _sweep_job(args):
    cfg, path, timings = args
    run_instance(cfg, path, timings=timings)
    return path


def sweep(cfg: InstanceConfig, seeds: int, out_dir, jobs: int = 1,
          timings: bool = False) -> list[str]:
    """Run `seeds` consecutive seeds of one config into a directory."""
    if seeds < 1:
        raise ValueError("need at least one seed")
    os.makedirs(out_dir, exist_ok=True)
    tasks = []
    for i in range(seeds):
        params = PlannerParams(n_b=cfg.params.n_b, seed=cfg.params.seed + i,
                               n_s=cfg.params.n_s, eta=cfg.params.eta,
                               prune=cfg.params.prune)
        run_cfg = InstanceConfig(**{**cfg.__dict__, "params": params})
        path = os.path.join(out_dir, f"run_{params.seed:05d}.csv")
        tasks.append((run_cfg, path, timings))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_job, tasks))
    return [_sweep_job(t) for t in tasks]
