"""Sample-complexity formulas, spectral radii and bound reports."""

import math

import numpy as np
import pytest

from packages.core.config import settings
from packages.core.errors import InputValidationError, NoConvergence
from packages.core.models import Edge, InfluenceGraph, NodeParams, ObsParams
from apps.bounds.formulas import l1_accuracy, log_sample_bound, pmax_bound, sample_bound, xi_size
from apps.bounds.report import sample_complexity
from apps.bounds.spectral import (
    closed_form_radius,
    influence_matrices,
    influence_radius,
    power_iteration,
    spectral_radius,
)
from apps.model.alphabet import alphabet_size_bound, support_alphabet
from apps.model.generators import generate


def _direct_bound(node_count, d, m_bar, epsilon, gamma, contraction):
    """Straight evaluation of the sample-count formula for moderate sizes."""
    pmax = math.floor(2 * math.log(alphabet_size_bound(m_bar)) / epsilon + 1)
    xi = support_alphabet(m_bar).size ** (1 + d * (pmax + 1))
    delta = epsilon ** 2 / (8 * xi)
    union = math.log(node_count) * (pmax + 1) + math.log(2 * xi / gamma)
    return d + union * xi ** 2 / ((1 - contraction) * delta ** 2)


def _lagged_single_node(weights, alpha=0.4):
    return InfluenceGraph(
        node_count=1,
        d=len(weights),
        beta=0.75,
        nodes=[NodeParams(id=0, alpha=alpha, bias=0.167)],
        edges=[Edge(source=0, target=0, weights=weights)],
    )


class TestFormulas:

    def test_pmax_values(self):
        assert pmax_bound(0, 0.1) == (pytest.approx(14.862943611198906, rel=1e-12), 14)
        assert pmax_bound(2, 0.2) == (pytest.approx(17.094379124341003, rel=1e-12), 17)
        assert pmax_bound(0, 2 * math.log(2)) == (pytest.approx(2.0), 2)

    def test_bits_read_epsilon_in_bits(self, monkeypatch):
        delta_in_nats = l1_accuracy(0.5 * math.log(2), 3.0)
        assert pmax_bound(0, 0.5 * math.log(2)) == (pytest.approx(5.0), 5)

        monkeypatch.setattr(settings, "entropy_base", "2")
        assert pmax_bound(0, 0.5) == (pytest.approx(5.0), 5)
        assert l1_accuracy(0.5, 3.0) == pytest.approx(delta_in_nats, rel=1e-12)

    def test_pmax_rejects_non_positive_epsilon(self):
        with pytest.raises(ValueError):
            pmax_bound(0, 0.0)

    def test_xi_size(self):
        assert xi_size(2, 1, 14) == (65536, pytest.approx(16 * math.log(2)))
        assert xi_size(5, 1, 17) == (19073486328125, pytest.approx(19 * math.log(5)))

    def test_xi_size_overflow(self):
        exact, log_xi = xi_size(5, 2, 17)
        assert exact is None
        assert log_xi == pytest.approx(37 * math.log(5))

    def test_l1_accuracy(self):
        assert l1_accuracy(0.1, 16 * math.log(2)) == pytest.approx(1.9073486328125e-08, rel=1e-12)

    @pytest.mark.parametrize("node_count,d,m_bar,epsilon,gamma,contraction", [
        (7, 1, 0, 0.1, 0.1, 0.88),
        (7, 2, 0, 0.5, 0.05, 0.5),
        (3, 1, 2, 1.0, 0.1, 0.3),
        (10, 1, 1, 2.0, 0.2, 0.9),
        (2, 3, 0, 1.5, 0.01, 0.1),
    ])
    def test_sample_bound_matches_direct_evaluation(self, node_count, d, m_bar, epsilon, gamma, contraction):
        _, pmax = pmax_bound(m_bar, epsilon)
        _, log_xi = xi_size(support_alphabet(m_bar).size, d, pmax)
        T, log10_T = sample_bound(node_count, d, pmax, log_xi, epsilon, gamma, contraction)
        expected = _direct_bound(node_count, d, m_bar, epsilon, gamma, contraction)
        assert T == pytest.approx(expected, rel=1e-10)
        assert log10_T == pytest.approx(math.log10(expected), rel=1e-10)

    def test_monotone(self):
        base = dict(node_count=7, d=1, pmax=14, log_xi=16 * math.log(2), epsilon=0.1, gamma=0.1, contraction=0.5)
        value = log_sample_bound(**base)
        assert log_sample_bound(**{**base, "log_xi": base["log_xi"] + 1}) > value
        assert log_sample_bound(**{**base, "gamma": 0.01}) > value
        assert log_sample_bound(**{**base, "node_count": 70}) > value
        assert log_sample_bound(**{**base, "contraction": 0.9}) > value

    def test_contraction_must_be_below_one(self):
        with pytest.raises(ValueError):
            log_sample_bound(7, 1, 14, 10.0, 0.1, 0.1, 1.0)

    def test_overflow_stays_in_log_space(self):
        _, log_xi = xi_size(7, 4, 200)
        T, log10_T = sample_bound(100, 4, 200, log_xi, 0.01, 0.1, 0.5)
        assert T is None
        assert log10_T > 300


class TestSpectralRadius:

    def test_two_by_two(self):
        assert spectral_radius(np.array([[0.2, 0.2], [0.3, 0.1]])) == pytest.approx(0.4, abs=1e-10)
        assert closed_form_radius(np.array([[0.2, 0.2], [0.3, 0.1]])) == pytest.approx(0.4, abs=1e-12)

    def test_power_iteration_agrees_with_closed_form(self):
        rho, iterations = power_iteration(np.array([[0.2, 0.2], [0.3, 0.1]]))
        assert rho == pytest.approx(0.4, abs=1e-8)
        assert iterations > 1

    def test_random_matrices(self):
        rng = np.random.default_rng(42)
        for size in range(3, 9):
            matrix = rng.random((size, size))
            expected = np.abs(np.linalg.eigvals(matrix)).max()
            assert spectral_radius(matrix) == pytest.approx(expected, abs=1e-8)

    def test_periodic_matrix(self):
        cycle = np.roll(np.eye(4), 1, axis=1) * 0.4
        assert spectral_radius(cycle) == pytest.approx(0.4, abs=1e-9)

    def test_no_convergence(self):
        with pytest.raises(NoConvergence) as info:
            power_iteration(np.array([[0.2, 0.2], [0.3, 0.1]]), max_iterations=1)
        assert info.value.iterations == 1

    def test_rejects_bad_input(self):
        with pytest.raises(InputValidationError):
            spectral_radius(np.ones((2, 3)))
        with pytest.raises(InputValidationError):
            spectral_radius(np.array([[0.1, -0.2], [0.3, 0.1]]))

    @pytest.mark.parametrize("topology", ["line", "tree", "ring", "random_bounded"])
    def test_uniform_alpha_graphs(self, topology):
        graph = generate(topology, 7, degree_cap=2, seed=1)
        rho, per_lag = influence_radius(graph)
        assert rho == pytest.approx(0.4, abs=1e-9)
        assert per_lag == [pytest.approx(0.4, abs=1e-9)]

    def test_max_over_lags(self):
        graph = _lagged_single_node([0.75, 0.25])
        matrices = influence_matrices(graph)
        np.testing.assert_allclose([m[0, 0] for m in matrices], [0.3, 0.1])
        rho, per_lag = influence_radius(graph)
        assert rho == pytest.approx(0.3)
        assert per_lag == [pytest.approx(0.3), pytest.approx(0.1)]


class TestSampleComplexity:

    def test_condition_arithmetic(self, single_node_graph):
        obs = ObsParams(mu_c0=0.1, mu_c1=0.2)
        report = sample_complexity(single_node_graph, obs, 0.1, 0.1)
        assert (report.mu_bar, report.L, report.rho) == (pytest.approx(0.3), pytest.approx(0.2), pytest.approx(0.4))
        assert report.condition_value == pytest.approx(0.4)
        assert report.applicable

    def test_condition_with_memory(self):
        graph = _lagged_single_node([1.0, 0.0])
        report = sample_complexity(graph, ObsParams(mu_c0=0.1, mu_c1=0.2), 0.1, 0.1)
        assert report.condition_value == pytest.approx(0.6324555320, abs=1e-9)

    def test_default_observation_regime(self, single_node_graph, obs):
        report = sample_complexity(single_node_graph, obs, 0.1, 0.1)
        assert report.condition_value == pytest.approx(0.88)
        assert report.pmax_cap == 14
        assert report.xi_size == 65536
        assert report.delta == pytest.approx(1.9073486328125e-08)
        assert report.T_bound is not None

    def test_violating_regime(self, single_node_graph):
        report = sample_complexity(single_node_graph, ObsParams(mu_c0=1.0, mu_c1=1.0), 0.1, 0.1)
        assert report.condition_value == pytest.approx(2.4)
        assert not report.applicable
        assert report.T_bound is None
        assert report.log10_T_bound is None

    def test_spectral_variant_and_looseness(self):
        graph = generate("line", 7)
        report = sample_complexity(graph, ObsParams(), 0.1, 0.1, lambda_star=0.4, empirical_T=3000)
        assert report.log10_T_bound > 20
        assert report.spectral_log10_T_bound < report.log10_T_bound
        assert report.looseness_log10 == pytest.approx(report.log10_T_bound - math.log10(3000))
        assert report.looseness_log10 > 5

    def test_rows_are_printable(self, single_node_graph, obs):
        rows = dict(sample_complexity(single_node_graph, obs, 0.1, 0.1).rows())
        assert rows["rho"] == "0.4"
        assert rows["applicable"] == "yes"

    @pytest.mark.parametrize("epsilon,gamma", [(0.0, 0.1), (-1.0, 0.1), (0.1, 0.0), (0.1, 1.0)])
    def test_rejects_bad_parameters(self, single_node_graph, obs, epsilon, gamma):
        with pytest.raises(InputValidationError):
            sample_complexity(single_node_graph, obs, epsilon, gamma)
