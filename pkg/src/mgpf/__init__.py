"""Multi-goal path finding in sampled configuration spaces.

An anytime planner that interleaves informed sampling with incremental
Steiner-tree maintenance and MST-based edge pruning, a uniform-sampling
baseline, brute-force oracles and a seeded benchmark CLI.
"""

from .informed import InformedSet, SampleBatch, add_samples, rotation_to_world, sample_informed
from .oracle import kruskal, metric_completion, optimal_mgpf
from .planner import (Baseline, IstStar, MgpfPath, PlannerParams, TraceRow,
                      baseline, extract_path, ist_star)
from .ripple import Forest, MeetRecord, ripple, verify_forest
from .roadmap import Roadmap, connection_radius
from .space import (Config, Env, PathSegment, SamplingError, heuristic,
                    is_motion_valid, is_state_valid, make_box_env,
                    make_center_obstacle, make_uniform_hypercubes,
                    sample_uniform_free)
from .terminal_graph import TerminalGraph

__version__ = "0.1.0"

__all__ = [
    "Baseline", "Config", "Env", "Forest", "InformedSet", "IstStar",
    "MeetRecord", "MgpfPath", "PathSegment", "PlannerParams", "Roadmap", "SampleBatch",
    "SamplingError", "TerminalGraph", "TraceRow", "add_samples", "baseline",
    "connection_radius", "extract_path", "heuristic", "is_motion_valid",
    "is_state_valid", "ist_star", "kruskal", "make_box_env",
    "make_center_obstacle", "make_uniform_hypercubes", "metric_completion",
    "optimal_mgpf", "ripple", "rotation_to_world", "sample_informed",
    "sample_uniform_free", "verify_forest",
]
