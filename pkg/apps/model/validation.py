"""Graph invariant checks."""

import math
from typing import List, Tuple

import numpy as np

from packages.core import get_logger
from packages.core.errors import (
    GraphValidationError,
    GraphViolation,
    MissingSelfLoop,
    ParamOutOfRange,
    WeightSumViolation,
)
from packages.core.models import InfluenceGraph

WEIGHT_SUM_TOLERANCE = 1e-9

logger = get_logger(__name__)


def _open_unit(value: float) -> bool:
    return 0.0 < value < 1.0


def collect_violations(graph: InfluenceGraph) -> List[GraphViolation]:
    """Every invariant violation, with node or edge identity."""
    violations: List[GraphViolation] = []
    n = graph.node_count

    if len(graph.nodes) != n:
        violations.append(ParamOutOfRange(field="nodes", detail=f"{len(graph.nodes)} nodes for node_count={n}"))
    for index, node in enumerate(graph.nodes):
        if node.id != index:
            violations.append(ParamOutOfRange(field="id", v=node.id, detail=f"expected id {index}"))

    if not _open_unit(graph.beta):
        violations.append(ParamOutOfRange(field="beta", detail=f"beta={graph.beta} not in (0,1)"))

    for node in graph.nodes:
        v = node.id
        if not _open_unit(node.alpha):
            violations.append(ParamOutOfRange(field="alpha", v=v, detail=f"alpha={node.alpha} not in (0,1)"))
        if not 0.0 <= node.bias <= 1.0:
            violations.append(ParamOutOfRange(field="bias", v=v, detail=f"bias={node.bias} not in [0,1]"))
        violations.extend(_noise_violations(v, node))

    sums = np.zeros(n)
    seen = set()
    for edge in graph.edges:
        u, v = edge.source, edge.target
        if u >= n or v >= n:
            violations.append(ParamOutOfRange(field="edges", v=v, detail=f"edge ({u},{v}) references unknown node"))
            continue
        if (u, v) in seen:
            violations.append(ParamOutOfRange(field="edges", v=v, detail=f"duplicate edge ({u},{v})"))
        seen.add((u, v))
        if len(edge.weights) != graph.d:
            violations.append(
                ParamOutOfRange(field="weights", v=v, detail=f"edge ({u},{v}) has {len(edge.weights)} weights, d={graph.d}")
            )
        if any(w < 0 or not math.isfinite(w) for w in edge.weights):
            violations.append(ParamOutOfRange(field="weights", v=v, detail=f"edge ({u},{v}) has a negative weight"))
        elif not any(w > 0 for w in edge.weights):
            violations.append(ParamOutOfRange(field="weights", v=v, detail=f"edge ({u},{v}) stores only zeros"))
        sums[v] += sum(edge.weights)

    for v in range(n):
        if (v, v) not in seen:
            violations.append(MissingSelfLoop(v=v))
        if abs(sums[v] - 1.0) > WEIGHT_SUM_TOLERANCE:
            violations.append(WeightSumViolation(v=v, sum=float(sums[v])))

    return violations


def _noise_violations(v: int, node) -> List[GraphViolation]:
    noise = node.noise
    found: List[GraphViolation] = []
    if len(noise.support) != len(noise.probs):
        found.append(ParamOutOfRange(field="noise", v=v, detail="support and probs differ in length"))
        return found
    if any(not 0.0 <= z <= 1.0 for z in noise.support):
        found.append(ParamOutOfRange(field="noise.support", v=v, detail="support must lie in [0,1]"))
    if any(p < 0 for p in noise.probs) or abs(sum(noise.probs) - 1.0) > WEIGHT_SUM_TOLERANCE:
        found.append(ParamOutOfRange(field="noise.probs", v=v, detail="probs must be >= 0 and sum to 1"))
    if not _open_unit(noise.mean):
        found.append(ParamOutOfRange(field="zbar", v=v, detail=f"noise mean {noise.mean} not in (0,1)"))
    if node.zbar is not None and abs(node.zbar - noise.mean) > WEIGHT_SUM_TOLERANCE:
        found.append(ParamOutOfRange(field="zbar", v=v, detail=f"zbar={node.zbar} differs from noise mean {noise.mean}"))
    return found


def validate_graph(graph: InfluenceGraph) -> InfluenceGraph:
    """Return the graph iff every invariant holds, else raise with the full report."""
    violations = collect_violations(graph)
    if violations:
        logger.warning(f"Graph rejected with {len(violations)} violation(s)")
        raise GraphValidationError(violations)
    return graph


def interior_range(graph: InfluenceGraph) -> Tuple[np.ndarray, np.ndarray]:
    """Smallest and largest reachable X_v over the noise support and any history."""
    alpha = graph.vector("alpha")
    bias = graph.vector("bias")
    z_min = np.array([node.noise.minimum for node in graph.nodes])
    z_max = np.array([node.noise.maximum for node in graph.nodes])
    low = (1 - alpha) * ((1 - graph.beta) * z_min + graph.beta * bias)
    high = (1 - alpha) * ((1 - graph.beta) * z_max + graph.beta * bias) + alpha
    return low, high


def require_interior(graph: InfluenceGraph) -> None:
    """X must stay strictly inside (0, 1) for every noise outcome."""
    low, high = interior_range(graph)
    violations: List[GraphViolation] = []
    for v in range(graph.node_count):
        if low[v] <= 0.0 or high[v] >= 1.0:
            violations.append(
                ParamOutOfRange(field="x_range", v=v, detail=f"reachable X in [{low[v]:.6g}, {high[v]:.6g}]")
            )
    if violations:
        raise GraphValidationError(violations)
