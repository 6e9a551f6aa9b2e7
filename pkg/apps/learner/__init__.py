"""Greedy influence-graph learner."""

from .artifacts import estimate_document, save_estimate, save_summary, summary_frame
from .models import LearnerConfig, NeighborhoodEstimate, NodeEstimate, RoundRecord, TraceStep
from .rec_greedy import RecGreedyLearner, default_pmax_cap, rec_greedy
from .scoring import EdgeMetrics, edge_metrics, perfect_recovery

__all__ = [
    "LearnerConfig",
    "NeighborhoodEstimate",
    "NodeEstimate",
    "RoundRecord",
    "TraceStep",
    "RecGreedyLearner",
    "default_pmax_cap",
    "rec_greedy",
    "EdgeMetrics",
    "edge_metrics",
    "perfect_recovery",
    "estimate_document",
    "save_estimate",
    "save_summary",
    "summary_frame",
]
