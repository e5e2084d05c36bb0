import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgpf.informed import (InformedSet, add_samples, rotation_to_world,
                           sample_informed)
from mgpf.space import make_box_env, make_center_obstacle, valid_mask
from mgpf.terminal_graph import TerminalGraph

FREE2 = make_box_env(2, [])


class TestRotation:
    def test_axis_aligned_is_identity(self):
        c = rotation_to_world(np.array([0.1, 0.2]), np.array([0.6, 0.2]))
        np.testing.assert_allclose(c, np.eye(2))

    def test_planar_quarter_turn(self):
        c = rotation_to_world(np.array([0.0, 0.0]), np.array([0.0, 1.0]))
        np.testing.assert_allclose(c, [[0.0, -1.0], [1.0, 0.0]], atol=1e-15)

    def test_degenerate_foci(self):
        with pytest.raises(ValueError):
            rotation_to_world(np.array([0.3, 0.3]), np.array([0.3, 0.3]))

    @given(st.integers(2, 6), st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_orthogonal_det_plus_one(self, dim, seed):
        rng = np.random.default_rng(seed)
        a, b = rng.random(dim), rng.random(dim)
        if np.linalg.norm(b - a) < 1e-9:
            return
        c = rotation_to_world(a, b)
        np.testing.assert_allclose(c @ c.T, np.eye(dim), atol=1e-12)
        assert np.linalg.det(c) == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(c[:, 0], (b - a) / np.linalg.norm(b - a),
                                   atol=1e-12)
        v = rng.standard_normal(dim)
        assert np.linalg.norm(c @ v) == pytest.approx(np.linalg.norm(v), rel=1e-12)


class TestSampleInformed:
    def test_infinite_cost_falls_back_to_uniform(self):
        iset = InformedSet(np.array([0.2, 0.5]), np.array([0.8, 0.5]), math.inf)
        rng1 = np.random.default_rng(7)
        rng2 = np.random.default_rng(7)
        from mgpf.space import sample_uniform_free
        got = sample_informed(iset, FREE2, rng1)
        np.testing.assert_array_equal(got, sample_uniform_free(FREE2, rng2))

    def test_degenerate_ellipse_samples_segment(self):
        a, b = np.array([0.2, 0.5]), np.array([0.8, 0.5])
        iset = InformedSet(a, b, 0.6)
        rng = np.random.default_rng(8)
        for _ in range(100):
            x = sample_informed(iset, FREE2, rng)
            assert x[1] == pytest.approx(0.5, abs=1e-12)
            assert 0.2 < x[0] < 0.8

    def test_membership_monte_carlo(self):
        a, b = np.array([0.2, 0.5]), np.array([0.8, 0.5])
        iset = InformedSet(a, b, 1.0)
        rng = np.random.default_rng(9)
        for _ in range(10**4):
            x = sample_informed(iset, FREE2, rng)
            assert np.linalg.norm(x - a) + np.linalg.norm(x - b) <= 1.0 + 1e-9

    def test_c_best_below_lower_bound_rejected(self):
        with pytest.raises(ValueError):
            InformedSet(np.array([0.2, 0.5]), np.array([0.8, 0.5]), 0.3)

    def test_samples_respect_obstacles(self):
        env = make_center_obstacle(2)
        a, b = np.array([0.02, 0.2]), np.array([0.02, 0.8])
        iset = InformedSet(a, b, 0.7)
        rng = np.random.default_rng(10)
        pts = np.array([sample_informed(iset, env, rng) for _ in range(200)])
        assert valid_mask(env, pts).all()


class TestAddSamples:
    def _tg(self, coords):
        return TerminalGraph(np.asarray(coords, dtype=float))

    def test_single_edge_gets_all_samples(self):
        tg = self._tg([[0.2, 0.5], [0.8, 0.5]])
        tg.cost[0, 1] = tg.cost[1, 0] = 0.7
        batch = add_samples({(0, 1): 1.0}, tg, FREE2, 50,
                            np.random.default_rng(11))
        assert batch.size == 50
        a, b = tg.coords[0], tg.coords[1]
        for x in batch.points:
            assert (np.linalg.norm(x - a) + np.linalg.norm(x - b)
                    <= 0.7 + 1e-9)

    def test_two_edge_draw_counts_binomial(self):
        tg = self._tg([[0.1, 0.1], [0.9, 0.1], [0.5, 0.9]])
        prob = {(0, 1): 0.5, (0, 2): 0.5}
        rng = np.random.default_rng(12)
        pairs = sorted(prob)
        cdf = np.cumsum([prob[p] for p in pairs])
        n = 10**4
        counts = {p: 0 for p in pairs}
        for _ in range(n):
            k = int(np.searchsorted(cdf, rng.random(), side="right"))
            counts[pairs[min(k, 1)]] += 1
        sigma = math.sqrt(n * 0.25)
        assert abs(counts[(0, 1)] - n / 2) <= 3 * sigma

    def test_empty_table_rejected(self):
        tg = self._tg([[0.2, 0.5], [0.8, 0.5]])
        with pytest.raises(ValueError):
            add_samples({}, tg, FREE2, 5, np.random.default_rng(0))

    def test_zero_batch_rejected(self):
        tg = self._tg([[0.2, 0.5], [0.8, 0.5]])
        with pytest.raises(ValueError):
            add_samples({(0, 1): 1.0}, tg, FREE2, 0, np.random.default_rng(0))

    def test_batch_points_all_valid(self):
        env = make_center_obstacle(2)
        tg = self._tg([[0.02, 0.2], [0.02, 0.8]])
        batch = add_samples({(0, 1): 1.0}, tg, env, 100,
                            np.random.default_rng(13))
        assert valid_mask(env, batch.points).all()

    def test_determinism(self):
        tg = self._tg([[0.2, 0.5], [0.8, 0.5]])
        tg.cost[0, 1] = tg.cost[1, 0] = 0.9
        b1 = add_samples({(0, 1): 1.0}, tg, FREE2, 20, np.random.default_rng(14))
        b2 = add_samples({(0, 1): 1.0}, tg, FREE2, 20, np.random.default_rng(14))
        np.testing.assert_array_equal(b1.points, b2.points)
