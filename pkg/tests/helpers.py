"""Shared test instances and closed forms."""

from pathlib import Path
from typing import Callable, Dict, Tuple

import numpy as np

from packages.core.models import InfluenceGraph
from apps.model.generators import generate

PROJECT_ROOT = Path(__file__).resolve().parents[1]

# The exact two-state chain of the single self-looped node
TWO_STATE_P = np.array([[0.84985, 0.15015], [0.44985, 0.55015]])
TWO_STATE_PI1 = 0.25025


def self_loop_graph(node_count: int, d: int = 1) -> InfluenceGraph:
    return generate("random_bounded", node_count, d=d, degree_cap=0)


def binary_entropy(p: float) -> float:
    return float(-p * np.log(p) - (1 - p) * np.log(1 - p))


def two_state_entropy() -> float:
    """Exact H(Y+ | Y) of the two-state chain."""
    return (1 - TWO_STATE_PI1) * binary_entropy(0.15015) + TWO_STATE_PI1 * binary_entropy(0.55015)


# name -> (graph builder, m_bar); |V| <= 3, d <= 2, m_bar <= 2
BATTERY: Dict[str, Tuple[Callable[[], InfluenceGraph], int]] = {
    "v1_d1_m0_self": (lambda: generate("line", 1), 0),
    "v2_d1_m0_line": (lambda: generate("line", 2), 0),
    "v2_d1_m0_selfonly": (lambda: self_loop_graph(2), 0),
    "v3_d1_m0_ring": (lambda: generate("ring", 3), 0),
    "v3_d1_m0_line": (lambda: generate("line", 3), 0),
    "v3_d1_m0_tree": (lambda: generate("tree", 3), 0),
    "v2_d2_m0_line": (lambda: generate("line", 2, d=2), 0),
    "v3_d2_m0_ring": (lambda: generate("ring", 3, d=2), 0),
    "v2_d1_m1_line": (lambda: generate("line", 2), 1),
    "v3_d1_m2_ring": (lambda: generate("ring", 3), 2),
    "v2_d2_m2_line": (lambda: generate("line", 2, d=2), 2),
    "v3_d2_m2_line": (lambda: generate("line", 3, d=2), 2),
}
