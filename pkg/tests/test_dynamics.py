"""Simulation of the influence dynamics."""

import json

import numpy as np
import pytest

from packages.core.errors import InputValidationError, TooShort
from packages.core.models import ObsParams
from packages.core.rng import make_rng
from apps.dynamics.kernel import DynamicsKernel
from apps.dynamics.simulator import State, initial_state, simulate, step
from apps.dynamics.trajectory import INITIALIZATION, load_trajectory, save_trajectory
from apps.model.generators import generate


class TestStep:

    def test_hidden_state_update(self, half_noise_graph, obs):
        state = State(
            x=np.array([0.5]),
            n_history=np.array([[1]]),
            m_history=np.array([[1]]),
            filled=1,
            prior=np.array([0.5]),
        )
        new_state, row = step(state, half_noise_graph, obs, make_rng(0))
        # 0.6 * (0.25 * 0.5 + 0.75 * 0.167) + 0.4 * 1
        assert new_state.x[0] == pytest.approx(0.55015, abs=1e-12)
        assert row.shape == (1, 2)
        assert row[0, 1] == 1
        assert new_state.filled == 1

    def test_virtual_prehistory(self):
        state = initial_state(generate("line", 2, d=3))
        np.testing.assert_allclose(state.y_history(), np.full((3, 2), 0.5))
        assert state.filled == 0

    def test_history_shifts(self, obs):
        graph = generate("line", 2, d=2)
        kernel = DynamicsKernel(graph, obs)
        rng = make_rng(4)
        state = initial_state(graph)
        rows = []
        for _ in range(3):
            state, row = step(state, graph, obs, rng, kernel)
            rows.append(row)
        np.testing.assert_array_equal(state.n_history[0], rows[-1][:, 0])
        np.testing.assert_array_equal(state.n_history[1], rows[-2][:, 0])
        assert state.filled == 2

    def test_observed_fraction_tracks_hidden_state(self, half_noise_graph):
        kernel = DynamicsKernel(half_noise_graph, ObsParams(m_bar=2, mu_c0=0.1, mu_c1=0.5))
        history = np.ones((1, 1))
        rng = make_rng(11)
        draws = [kernel.advance(history, rng.random((1, kernel.draws_per_node))) for _ in range(20_000)]
        x = np.array([item[0][0] for item in draws])
        y = np.array([item[1][0] / item[2][0] for item in draws])
        np.testing.assert_allclose(x, 0.55015, atol=1e-12)
        assert max(item[2][0] for item in draws) == 3
        assert y.mean() == pytest.approx(0.55015, abs=0.015)

    def test_counts_follow_truncated_poisson(self):
        graph = generate("line", 1)
        kernel = DynamicsKernel(graph, ObsParams(m_bar=2, mu_c0=0.0, mu_c1=0.0))
        # mu = 0 puts every count at M = 1
        m = kernel.sample_counts(np.array([0.5]), np.array([0.999]))
        assert m.tolist() == [1]


class TestSimulate:

    def test_matches_repeated_steps(self, obs):
        graph = generate("ring", 3, d=2)
        trajectory = simulate(graph, obs, 25, burn_in=0, seed=9)

        rng = make_rng(9)
        kernel = DynamicsKernel(graph, obs)
        state = initial_state(graph)
        rows = []
        for _ in range(25):
            state, row = step(state, graph, obs, rng, kernel)
            rows.append(row)
        stepped = np.stack(rows)
        np.testing.assert_array_equal(trajectory.n, stepped[:, :, 0])
        np.testing.assert_array_equal(trajectory.m, stepped[:, :, 1])

    def test_burn_in_discards_prefix(self, two_node_graph, obs):
        full = simulate(two_node_graph, obs, 60, burn_in=0, seed=5)
        tail = simulate(two_node_graph, obs, 40, burn_in=20, seed=5)
        np.testing.assert_array_equal(full.n[20:], tail.n)

    def test_reproducible(self, two_node_graph):
        obs = ObsParams(m_bar=2)
        first = simulate(two_node_graph, obs, 500, seed=3)
        second = simulate(two_node_graph, obs, 500, seed=3)
        other = simulate(two_node_graph, obs, 500, seed=4)
        np.testing.assert_array_equal(first.n, second.n)
        np.testing.assert_array_equal(first.m, second.m)
        assert not np.array_equal(first.n, other.n)

    def test_binary_observations(self, two_node_graph, obs):
        trajectory = simulate(two_node_graph, obs, 300, seed=1)
        assert (trajectory.m == 1).all()
        assert set(np.unique(trajectory.n)) <= {0, 1}

    def test_counts_within_cap(self, two_node_graph):
        trajectory = simulate(two_node_graph, ObsParams(m_bar=2, mu_c0=1.0, mu_c1=1.0), 2000, seed=2)
        assert trajectory.m.min() >= 1
        assert trajectory.m.max() <= 3
        assert (trajectory.n <= trajectory.m).all()
        assert (trajectory.n >= 0).all()
        assert trajectory.m.max() == 3

    def test_stationary_frequency(self, single_node_graph, obs):
        trajectory = simulate(single_node_graph, obs, 50_000, seed=7)
        assert trajectory.n.mean() == pytest.approx(0.25025, abs=0.015)

    def test_too_short(self, obs):
        graph = generate("line", 2, d=3)
        with pytest.raises(TooShort):
            simulate(graph, obs, 2)

    def test_metadata(self, two_node_graph, obs):
        trajectory = simulate(two_node_graph, obs, 10, burn_in=5, seed=8)
        meta = trajectory.metadata()
        assert meta["seed"] == 8
        assert meta["burn_in"] == 5
        assert meta["initialization"] == INITIALIZATION
        assert len(meta["graph_digest"]) == 64


class TestTrajectoryFiles:

    def test_save_and_load(self, tmp_path, two_node_graph):
        trajectory = simulate(two_node_graph, ObsParams(m_bar=1), 50, seed=6)
        paths = save_trajectory(trajectory, tmp_path / "run.csv")
        with open(paths["metadata"]) as f:
            assert json.load(f)["d"] == 1

        loaded = load_trajectory(paths["csv"])
        np.testing.assert_array_equal(loaded.n, trajectory.n)
        np.testing.assert_array_equal(loaded.m, trajectory.m)
        assert (loaded.d, loaded.m_bar, loaded.seed) == (1, 1, 6)

    def test_long_format(self, two_node_graph, obs):
        frame = simulate(two_node_graph, obs, 3, seed=0).to_frame()
        assert list(frame.columns) == ["t", "node", "N", "M"]
        assert frame["t"].tolist() == [0, 0, 1, 1, 2, 2]
        assert frame["node"].tolist() == [0, 1, 0, 1, 0, 1]

    def test_missing_depth(self, tmp_path):
        path = tmp_path / "bare.csv"
        path.write_text("t,node,N,M\n0,0,1,1\n1,0,0,1\n")
        with pytest.raises(InputValidationError):
            load_trajectory(path)
        assert load_trajectory(path, d=1).length == 2

    def test_rejects_impossible_pairs(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,node,N,M\n0,0,2,1\n1,0,0,1\n")
        with pytest.raises(InputValidationError):
            load_trajectory(path, d=1, m_bar=0)
