import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from mgpf.planner import IstStar, PlannerParams
from mgpf.roadmap import Roadmap
from mgpf.space import make_center_obstacle, make_uniform_hypercubes
from mgpf.svg import render_svg

SVG_NS = "{http://www.w3.org/2000/svg}"


def parse(doc: str):
    return ET.fromstring(doc)


class TestRenderSvg:
    def test_empty_roadmap_draws_obstacles_only(self):
        env = make_uniform_hypercubes(2)
        rm = Roadmap(env)
        doc = render_svg(rm, None, None, env)
        root = parse(doc)
        rects = root.findall(f"{SVG_NS}rect")
        assert len(rects) == 2 + 100     # canvas + frame + obstacle grid
        assert not root.findall(f"{SVG_NS}line")
        assert not root.findall(f"{SVG_NS}ellipse")

    def test_planner_state_renders_all_layers(self):
        env = make_center_obstacle(2)
        pts = np.array([[0.02, 0.02], [0.98, 0.98], [0.02, 0.98]])
        planner = IstStar(env, pts, PlannerParams(n_b=2, n_s=60, seed=1))
        planner.run()
        doc = render_svg(planner.rm, planner.forest, planner.tg, env,
                         prob=planner.prob)
        root = parse(doc)
        assert root.get("version") == "1.1"
        assert root.findall(f"{SVG_NS}line")
        assert len(root.findall(f"{SVG_NS}circle")) == 3
        assert len(root.findall(f"{SVG_NS}text")) == 3

    def test_degenerate_informed_set_renders_segment_glyph(self):
        env = make_center_obstacle(2)
        pts = np.array([[0.02, 0.2], [0.02, 0.8]])
        planner = IstStar(env, pts, PlannerParams(n_b=1, n_s=5, seed=2))
        planner.tg.cost[0, 1] = planner.tg.cost[1, 0] = planner.tg.h[0, 1]
        doc = render_svg(planner.rm, planner.forest, planner.tg, env,
                         prob={(0, 1): 1.0})
        assert "<ellipse" not in doc

    def test_finite_cost_renders_ellipse(self):
        env = make_center_obstacle(2)
        pts = np.array([[0.2, 0.02], [0.8, 0.02]])
        planner = IstStar(env, pts, PlannerParams(n_b=1, n_s=5, seed=3))
        planner.tg.cost[0, 1] = planner.tg.cost[1, 0] = 0.9
        doc = render_svg(planner.rm, planner.forest, planner.tg, env,
                         prob={(0, 1): 1.0})
        root = parse(doc)
        ellipses = root.findall(f"{SVG_NS}ellipse")
        assert len(ellipses) == 1
        rx = float(ellipses[0].get("rx"))
        ry = float(ellipses[0].get("ry"))
        assert rx == pytest.approx(0.45 * 800, abs=1.0)
        want_ry = math.sqrt(0.9**2 - 0.6**2) / 2 * 800
        assert ry == pytest.approx(want_ry, abs=1.0)

    def test_rejects_high_dimension(self):
        env = make_center_obstacle(3)
        with pytest.raises(ValueError):
            render_svg(Roadmap(env), None, None, env)
