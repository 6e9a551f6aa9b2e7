"""Graph model, validation, alphabet and persistence."""

from fractions import Fraction

import numpy as np
import pytest

from packages.core.errors import (
    GraphValidationError,
    InvalidTopologyParams,
    MissingSelfLoop,
    ParamOutOfRange,
    WeightSumViolation,
)
from packages.core.models import Edge, InfluenceGraph, MuOverride, NodeParams, NoiseSpec, ObsParams
from apps.model.alphabet import alphabet_size_bound, support_alphabet
from apps.model.generators import generate
from apps.model.io import graph_digest, graph_from_document, graph_to_document, load_graph, save_graph
from apps.model.validation import collect_violations, interior_range, require_interior, validate_graph


def _graph(edges, node_count=2, d=1, beta=0.75, alpha=0.4):
    nodes = [NodeParams(id=v, alpha=alpha, bias=0.167) for v in range(node_count)]
    return InfluenceGraph(node_count=node_count, d=d, beta=beta, nodes=nodes, edges=edges)


class TestValidation:

    def test_generated_graphs_are_valid(self):
        for topology in ("line", "tree", "ring", "random_bounded"):
            graph = generate(topology, 7, d=2, degree_cap=2, seed=3)
            assert collect_violations(graph) == []

    def test_weight_sum_violation(self):
        graph = _graph([
            Edge(source=0, target=0, weights=[1.0]),
            Edge(source=1, target=1, weights=[0.6]),
        ])
        violations = collect_violations(graph)
        assert violations == [WeightSumViolation(v=1, sum=0.6)]

    def test_missing_self_loop(self):
        graph = _graph([
            Edge(source=0, target=0, weights=[1.0]),
            Edge(source=0, target=1, weights=[1.0]),
        ])
        assert MissingSelfLoop(v=1) in collect_violations(graph)

    def test_reports_every_violation(self):
        graph = _graph(
            [Edge(source=0, target=1, weights=[1.0])],
            beta=1.5,
        )
        with pytest.raises(GraphValidationError) as info:
            validate_graph(graph)
        kinds = [item["kind"] for item in info.value.report()]
        assert kinds.count("MissingSelfLoop") == 2
        assert "WeightSumViolation" in kinds
        assert any(item["field"] == "beta" for item in info.value.report() if item["kind"] == "ParamOutOfRange")

    def test_negative_and_all_zero_weights(self):
        graph = _graph(
            [
                Edge(source=0, target=0, weights=[1.0, 0.0]),
                Edge(source=1, target=1, weights=[1.2, -0.2]),
                Edge(source=0, target=1, weights=[0.0, 0.0]),
            ],
            d=2,
        )
        details = [item.detail for item in collect_violations(graph) if isinstance(item, ParamOutOfRange)]
        assert any("negative" in detail for detail in details)
        assert any("only zeros" in detail for detail in details)

    def test_wrong_lag_count(self):
        graph = _graph([Edge(source=0, target=0, weights=[1.0])], node_count=1, d=2)
        assert any(isinstance(item, ParamOutOfRange) and item.field == "weights" for item in collect_violations(graph))

    def test_alpha_must_be_open(self):
        graph = _graph([Edge(source=0, target=0, weights=[1.0])], node_count=1, alpha=1.0)
        assert any(isinstance(item, ParamOutOfRange) and item.field == "alpha" for item in collect_violations(graph))

    def test_zero_lag_weight_is_allowed(self):
        graph = _graph([Edge(source=0, target=0, weights=[1.0, 0.0])], node_count=1, d=2)
        assert collect_violations(graph) == []

    def test_interior_requirement(self):
        graph = generate("line", 2, bias=0.0)
        with pytest.raises(GraphValidationError) as info:
            require_interior(graph)
        assert {item.v for item in info.value.violations} == {0, 1}

    def test_default_graph_is_interior(self, single_node_graph):
        require_interior(single_node_graph)

    def test_interior_range_values(self, single_node_graph):
        low, high = interior_range(single_node_graph)
        np.testing.assert_allclose(low, [0.07515])
        np.testing.assert_allclose(high, [0.62515])


class TestGenerators:

    def test_line(self):
        graph = generate("line", 4)
        assert graph.neighborhoods() == {0: [], 1: [0], 2: [1], 3: [2]}

    def test_tree(self):
        graph = generate("tree", 7)
        assert graph.neighborhoods() == {0: [], 1: [0], 2: [0], 3: [1], 4: [1], 5: [2], 6: [2]}

    def test_ring(self):
        graph = generate("ring", 3)
        assert graph.neighborhoods() == {0: [2], 1: [0], 2: [1]}

    def test_uniform_weights(self):
        graph = generate("line", 3, d=2)
        weights = graph.weight_tensor()
        np.testing.assert_allclose(weights[:, 1, :], [[0.25, 0.25, 0.0], [0.25, 0.25, 0.0]])
        np.testing.assert_allclose(weights.sum(axis=(0, 2)), 1.0)

    def test_random_bounded_respects_cap_and_seed(self):
        first = generate("random_bounded", 9, degree_cap=2, seed=11)
        second = generate("random_bounded", 9, degree_cap=2, seed=11)
        assert first.neighborhoods() == second.neighborhoods()
        assert all(len(parents) <= 2 for parents in first.neighborhoods().values())

    def test_degree_cap_zero_gives_self_loops_only(self):
        graph = generate("random_bounded", 4, degree_cap=0)
        assert all(parents == [] for parents in graph.neighborhoods().values())

    def test_invalid_arguments(self):
        with pytest.raises(InvalidTopologyParams):
            generate("star", 3)
        with pytest.raises(InvalidTopologyParams):
            generate("line", 0)
        with pytest.raises(InvalidTopologyParams):
            generate("line", 3, d=0)


class TestAlphabet:

    @pytest.mark.parametrize("m_bar,size", [(0, 2), (1, 3), (2, 5), (3, 7)])
    def test_sizes(self, m_bar, size):
        alphabet = support_alphabet(m_bar)
        assert alphabet.size == size
        assert alphabet.size <= alphabet_size_bound(m_bar)

    def test_values_are_sorted_fractions(self):
        assert support_alphabet(2).values == [
            Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1),
        ]

    def test_equal_fractions_share_a_code(self):
        alphabet = support_alphabet(3)
        codes = alphabet.encode(np.array([1, 2, 0, 3]), np.array([2, 4, 1, 3]))
        assert codes[0] == codes[1]
        assert alphabet.values[codes[0]] == Fraction(1, 2)
        assert alphabet.values[codes[2]] == 0
        assert alphabet.values[codes[3]] == 1

    def test_render(self):
        alphabet = support_alphabet(2)
        assert [alphabet.render(c) for c in range(alphabet.size)] == ["0", "1/3", "1/2", "2/3", "1"]

    def test_negative_m_bar_is_reported(self):
        for build in (support_alphabet, alphabet_size_bound):
            with pytest.raises(GraphValidationError) as info:
                build(-1)
            assert info.value.report() == [
                {"kind": "ParamOutOfRange", "field": "m_bar", "v": None, "detail": "must be >= 0, got -1"},
            ]


class TestObsParams:

    def test_mu_is_clamped(self):
        obs = ObsParams(mu_c0=0.1, mu_c1=-0.5)
        assert obs.mu(1.0) == 0.0
        assert obs.mu_bar() == pytest.approx(0.1)
        assert obs.lipschitz() == pytest.approx(0.5)

    def test_overrides(self):
        obs = ObsParams(mu_overrides={1: MuOverride(c0=0.2, c1=1.0)})
        assert obs.mu_bar(2) == pytest.approx(1.2)
        assert obs.lipschitz(2) == pytest.approx(1.0)
        assert obs.mu_bar(1) == pytest.approx(0.6)


class TestGraphIO:

    def test_round_trip(self, tmp_path):
        graph = generate("ring", 3, d=2, noise=NoiseSpec(support=[0.2, 0.9], probs=[0.3, 0.7]))
        obs = ObsParams(m_bar=2, mu_c0=0.3, mu_c1=0.2)
        path = save_graph(tmp_path / "graph.json", graph, obs)
        loaded_graph, loaded_obs = load_graph(path)
        assert loaded_graph.model_dump() == graph.model_dump()
        assert loaded_obs.model_dump() == obs.model_dump()
        assert graph_digest(loaded_graph, loaded_obs) == graph_digest(graph, obs)

    def test_digest_tracks_parameters(self, single_node_graph):
        assert graph_digest(single_node_graph, ObsParams()) != graph_digest(single_node_graph, ObsParams(m_bar=1))

    def test_invalid_document(self, two_node_graph, obs):
        document = graph_to_document(two_node_graph, obs)
        document["edges"][1]["weights"] = [0.9]
        with pytest.raises(GraphValidationError) as info:
            graph_from_document(document)
        sums = [item for item in info.value.violations if isinstance(item, WeightSumViolation)]
        assert [item.v for item in sums] == [1]
        assert sums[0].sum == pytest.approx(1.4)

    def test_malformed_document(self):
        with pytest.raises(GraphValidationError):
            graph_from_document({"node_count": "two"})
