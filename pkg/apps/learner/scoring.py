"""Scoring learned parent sets against a known graph."""

from typing import Dict, List, Mapping, Union

from pydantic import BaseModel

from packages.core.errors import InputValidationError
from packages.core.models import InfluenceGraph

from .models import NeighborhoodEstimate

ParentSets = Union[NeighborhoodEstimate, Mapping[int, List[int]]]


class EdgeMetrics(BaseModel):
    true_positive: int
    false_positive: int
    false_negative: int
    precision: float
    recall: float


def _parents(estimate: ParentSets, graph: InfluenceGraph) -> Dict[int, set]:
    parents = estimate.parents if isinstance(estimate, NeighborhoodEstimate) else dict(estimate)
    if set(parents) != set(graph.node_ids):
        raise InputValidationError(
            f"Estimate covers nodes {sorted(parents)} but the graph has {graph.node_count} nodes"
        )
    return {v: set(items) for v, items in parents.items()}


def perfect_recovery(estimate: ParentSets, graph: InfluenceGraph) -> bool:
    """True iff every learned parent set equals the true neighbourhood N_v."""
    parents = _parents(estimate, graph)
    return all(parents[v] == set(graph.neighborhood(v)) for v in graph.node_ids)


def edge_metrics(estimate: ParentSets, graph: InfluenceGraph) -> EdgeMetrics:
    """Per-edge precision and recall over cross edges (self-loops excluded)."""
    parents = _parents(estimate, graph)
    learned = {(u, v) for v, items in parents.items() for u in items}
    truth = {(u, v) for v in graph.node_ids for u in graph.neighborhood(v)}
    tp = len(learned & truth)
    fp = len(learned - truth)
    fn = len(truth - learned)
    return EdgeMetrics(
        true_positive=tp,
        false_positive=fp,
        false_negative=fn,
        precision=tp / (tp + fp) if tp + fp else 1.0,
        recall=tp / (tp + fn) if tp + fn else 1.0,
    )
