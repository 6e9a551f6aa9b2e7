"""Standard influence graph topologies."""

from typing import Dict, List, Optional

from packages.core import get_logger
from packages.core.errors import InvalidTopologyParams
from packages.core.models import Edge, InfluenceGraph, NodeParams, NoiseSpec
from packages.core.rng import GRAPH, make_rng

from .validation import validate_graph

TOPOLOGIES = ("line", "tree", "ring", "random_bounded")

logger = get_logger(__name__)


def _parents(topology: str, node_count: int, degree_cap: int, seed: int) -> Dict[int, List[int]]:
    if topology == "line":
        return {v: [v - 1] if v > 0 else [] for v in range(node_count)}
    if topology == "tree":
        return {v: [(v - 1) // 2] if v > 0 else [] for v in range(node_count)}
    if topology == "ring":
        if node_count == 1:
            return {0: []}
        return {v: [(v - 1) % node_count] for v in range(node_count)}

    rng = make_rng(seed, GRAPH)
    parents: Dict[int, List[int]] = {}
    for v in range(node_count):
        others = [u for u in range(node_count) if u != v]
        k = int(rng.integers(0, min(degree_cap, len(others)) + 1))
        chosen = rng.choice(others, size=k, replace=False) if k else []
        parents[v] = sorted(int(u) for u in chosen)
    return parents


def generate(
    topology: str,
    node_count: int,
    d: int = 1,
    alpha: float = 0.4,
    beta: float = 0.75,
    bias: float = 0.167,
    degree_cap: int = 1,
    seed: int = 0,
    noise: Optional[NoiseSpec] = None,
) -> InfluenceGraph:
    """
    Build a validated graph with uniformly split incoming weights.

    Each of the (|N_v| + 1) * d incoming weights of node v equals
    1 / ((|N_v| + 1) * d).

    Args:
        topology: one of line, tree, ring, random_bounded
        node_count: number of nodes
        d: memory depth
        alpha: openness shared by all nodes
        beta: noise/bias mixing weight
        bias: inner bias shared by all nodes
        degree_cap: in-degree cap (random_bounded only)
        seed: seed for random_bounded
        noise: fluctuation law, Bernoulli(0.5) on {0, 1} by default

    Returns:
        Validated InfluenceGraph
    """
    if topology not in TOPOLOGIES:
        raise InvalidTopologyParams(f"Unknown topology '{topology}', expected one of {TOPOLOGIES}")
    if node_count < 1:
        raise InvalidTopologyParams(f"node_count must be >= 1, got {node_count}")
    if d < 1:
        raise InvalidTopologyParams(f"d must be >= 1, got {d}")
    if degree_cap < 0:
        raise InvalidTopologyParams(f"degree_cap must be >= 0, got {degree_cap}")

    noise = noise or NoiseSpec()
    parents = _parents(topology, node_count, degree_cap, seed)

    edges: List[Edge] = []
    for v in range(node_count):
        sources = sorted(parents[v] + [v])
        share = 1.0 / (len(sources) * d)
        edges.extend(Edge(source=u, target=v, weights=[share] * d) for u in sources)

    nodes = [NodeParams(id=v, alpha=alpha, bias=bias, noise=noise) for v in range(node_count)]
    graph = InfluenceGraph(node_count=node_count, d=d, beta=beta, nodes=nodes, edges=edges, topology=topology)

    logger.debug(f"Generated {topology} graph with {node_count} nodes, d={d}, {len(edges)} edges")
    return validate_graph(graph)
