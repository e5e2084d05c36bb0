"""2D SVG snapshots of a planner's state, for eyeballing runs.

Draws obstacles, the roadmap, the shortest-path forest coloured by owning
terminal, the informed ellipse of every active terminal pair (opacity
scaled by its sampling probability) and the current tree.
"""

from __future__ import annotations

import math

from .space import Env

_SIZE = 800
_MARGIN = 20
_ROOT_COLORS = ("#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
                "#8c564b", "#e377c2", "#bcbd22")


def _px(x: float) -> float:
    return _MARGIN + x * _SIZE


def _py(y: float) -> float:
    return _MARGIN + (1.0 - y) * _SIZE


def _line(a, b, stroke, width, opacity=1.0) -> str:
    return (f'<line x1="{_px(a[0]):.2f}" y1="{_py(a[1]):.2f}" '
            f'x2="{_px(b[0]):.2f}" y2="{_py(b[1]):.2f}" '
            f'stroke="{stroke}" stroke-width="{width}" '
            f'stroke-opacity="{opacity:.3f}"/>')


def render_svg(rm, forest, tg, env: Env, prob=None) -> str:
    """Render the current planner state as an SVG 1.1 document (dim 2 only)."""
    if env.dim != 2:
        raise ValueError(f"SVG snapshots support dim 2 only, got {env.dim}")
    side = _SIZE + 2 * _MARGIN
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{side}" height="{side}" viewBox="0 0 {side} {side}">',
        f'<rect x="0" y="0" width="{side}" height="{side}" fill="white"/>',
        f'<rect x="{_px(0):.2f}" y="{_py(1):.2f}" width="{_SIZE}" '
        f'height="{_SIZE}" fill="none" stroke="black"/>',
    ]
    for box in env.obstacles:
        (x0, x1), (y0, y1) = box
        parts.append(
            f'<rect x="{_px(x0):.2f}" y="{_py(y1):.2f}" '
            f'width="{(x1 - x0) * _SIZE:.2f}" height="{(y1 - y0) * _SIZE:.2f}" '
            f'fill="#bbbbbb"/>')

    if rm is not None and rm.num_nodes:
        coords = rm.coords()
        eu, ev, _ = rm.edge_arrays()
        for u, v in zip(eu, ev):
            parts.append(_line(coords[u], coords[v], "#cccccc", 0.5, 0.8))
        if forest is not None:
            for u, p in enumerate(forest.parent):
                if u >= forest.num_terminals and p >= 0:
                    color = _ROOT_COLORS[forest.root[u] % len(_ROOT_COLORS)]
                    parts.append(_line(coords[u], coords[p], color, 0.9))

    if tg is not None:
        max_p = max(prob.values()) if prob else 0.0
        for pair in sorted(tg.active):
            u, v = pair
            c_best = float(tg.cost[u, v])
            if not math.isfinite(c_best):
                continue
            a, b = tg.coords[u], tg.coords[v]
            c_min = float(tg.h[u, v])
            opacity = 0.25
            if max_p > 0.0:
                opacity = 0.05 + 0.55 * prob.get(pair, 0.0) / max_p
            gap = c_best * c_best - c_min * c_min
            if gap <= 1e-12:
                parts.append(_line(a, b, "#1f77b4", 1.2, opacity))
                continue
            cx, cy = (a + b) / 2.0
            deg = math.degrees(math.atan2(_py(b[1]) - _py(a[1]),
                                          _px(b[0]) - _px(a[0])))
            parts.append(
                f'<ellipse cx="0" cy="0" rx="{c_best / 2.0 * _SIZE:.2f}" '
                f'ry="{math.sqrt(gap) / 2.0 * _SIZE:.2f}" '
                f'transform="translate({_px(cx):.2f} {_py(cy):.2f}) '
                f'rotate({deg:.2f})" fill="#1f77b4" '
                f'fill-opacity="{opacity:.3f}"/>')
        for pair in sorted(tg.tree):
            parts.append(_line(tg.coords[pair[0]], tg.coords[pair[1]],
                               "#1f77b4", 3.0))
        for i in range(tg.n):
            x, y = tg.coords[i]
            parts.append(f'<circle cx="{_px(x):.2f}" cy="{_py(y):.2f}" r="5" '
                         f'fill="black"/>')
            parts.append(f'<text x="{_px(x) + 7:.2f}" y="{_py(y) - 7:.2f}" '
                         f'font-size="14">{i}</text>')
    parts.append("</svg>")
    return "\n".join(parts)
