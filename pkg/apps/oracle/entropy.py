"""Exact stationary entropies and the brute-force structure oracle."""

import itertools
import threading
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from packages.core import get_logger
from packages.core.config import oracle_config
from packages.core.errors import InputValidationError
from packages.core.models import InfluenceGraph
from apps.estimation.entropy import entropy_of_counts

from .chain import ExactChain

logger = get_logger(__name__)


def exact_directed_conditional_entropy(chain: ExactChain, v: int, Q: Iterable[int] = ()) -> float:
    """
    H(v+ | v, Q) under the stationary law.

    The joint of (Y_v(t+1), histories of v and Q) is pi times node v's
    observation kernel, aggregated over states sharing the same histories.
    """
    if chain.kernels is None:
        raise InputValidationError("Chain has no per-node observation kernels")
    Q = sorted(set(Q))
    if v in Q:
        raise InputValidationError(f"Conditioning set {Q} must not contain v={v}")
    if not 0 <= v < chain.node_count or any(not 0 <= u < chain.node_count for u in Q):
        raise InputValidationError(f"Node ids must lie in [0, {chain.node_count})")

    K = chain.kernels.shape[2]
    selected = chain.digits[:, [v] + Q, :].reshape(chain.size, -1)
    powers = K ** np.arange(selected.shape[1] - 1, -1, -1, dtype=np.int64)
    _, context = np.unique(selected @ powers, return_inverse=True)
    context = context.ravel()

    mass = chain.pi[:, None] * chain.kernels[:, v, :]
    joint = np.zeros((int(context.max()) + 1, K))
    np.add.at(joint, context, mass)
    return max(entropy_of_counts(joint.ravel()) - entropy_of_counts(joint.sum(axis=1)), 0.0)


class OracleEntropySource:
    """Exact entropies behind the learner's EntropySource interface."""

    def __init__(self, chain: ExactChain):
        self.chain = chain
        self._memo: Dict[Tuple[int, FrozenSet[int]], float] = {}
        self._lock = threading.Lock()

    @property
    def node_count(self) -> int:
        return self.chain.node_count

    def conditional_entropy(self, v: int, Q: Iterable[int] = ()) -> float:
        key = (v, frozenset(Q))
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        value = exact_directed_conditional_entropy(self.chain, v, key[1])
        with self._lock:
            self._memo[key] = value
        return value


def brute_force_neighborhoods(chain: ExactChain, tolerance: Optional[float] = None) -> Dict[int, List[int]]:
    """
    Smallest conditioning set reaching the full-conditioning entropy, per node.

    Subsets are tried by size, then lexicographically; the first Q with
    H(v+|v,Q) <= H(v+|v,V\\{v}) + tolerance wins.
    """
    tolerance = oracle_config.brute_force_tolerance if tolerance is None else tolerance
    source = OracleEntropySource(chain)
    parents: Dict[int, List[int]] = {}
    for v in range(chain.node_count):
        others = [u for u in range(chain.node_count) if u != v]
        target = source.conditional_entropy(v, others) + tolerance
        for size in range(len(others) + 1):
            found = next(
                (list(subset) for subset in itertools.combinations(others, size)
                 if source.conditional_entropy(v, subset) <= target),
                None,
            )
            if found is not None:
                parents[v] = found
                break
    return parents


class EntropyGap(BaseModel):
    """Smallest entropy drop a true neighbour produces.

    ``neighbor_gap`` removes one neighbour from the full neighbourhood;
    ``screening_gap`` adds a neighbour u to any set Q that excludes it.
    Both are None for graphs without cross edges.
    """
    neighbor_gap: Optional[float] = None
    screening_gap: Optional[float] = None
    per_node: Dict[int, Optional[float]] = {}

    @property
    def epsilon(self) -> Optional[float]:
        return self.screening_gap


def entropy_gap(chain: ExactChain, graph: Optional[InfluenceGraph] = None) -> EntropyGap:
    """Measure the instance's entropy gaps from exact entropies."""
    graph = graph or chain.graph
    if graph is None:
        raise InputValidationError("entropy_gap needs the true graph")
    source = OracleEntropySource(chain)
    per_node: Dict[int, Optional[float]] = {}
    screening: List[float] = []

    for v in graph.node_ids:
        neighbors = graph.neighborhood(v)
        if not neighbors:
            per_node[v] = None
            continue
        full = source.conditional_entropy(v, neighbors)
        per_node[v] = min(
            source.conditional_entropy(v, [w for w in neighbors if w != u]) - full for u in neighbors
        )
        for u in neighbors:
            rest = [w for w in graph.node_ids if w not in (u, v)]
            for size in range(len(rest) + 1):
                for Q in itertools.combinations(rest, size):
                    screening.append(
                        source.conditional_entropy(v, Q) - source.conditional_entropy(v, Q + (u,))
                    )

    gaps = [value for value in per_node.values() if value is not None]
    return EntropyGap(
        neighbor_gap=min(gaps) if gaps else None,
        screening_gap=min(screening) if screening else None,
        per_node=per_node,
    )


class IndependenceViolation(BaseModel):
    v: int
    u: int
    difference: float


def independence_violations(
    chain: ExactChain,
    graph: Optional[InfluenceGraph] = None,
    tolerance: Optional[float] = None,
) -> List[IndependenceViolation]:
    """Pairs (v, u), u outside N_v, where adding u to N_v changes H(v+|v,N_v) beyond tolerance."""
    graph = graph or chain.graph
    if graph is None:
        raise InputValidationError("independence_violations needs the true graph")
    tolerance = oracle_config.brute_force_tolerance if tolerance is None else tolerance
    source = OracleEntropySource(chain)
    violations: List[IndependenceViolation] = []
    for v in graph.node_ids:
        neighbors = graph.neighborhood(v)
        base = source.conditional_entropy(v, neighbors)
        for u in graph.node_ids:
            if u == v or u in neighbors:
                continue
            difference = abs(source.conditional_entropy(v, neighbors + [u]) - base)
            if difference > tolerance:
                violations.append(IndependenceViolation(v=v, u=u, difference=difference))
    if violations:
        logger.warning(f"{len(violations)} conditional-independence violations above {tolerance:g}")
    return violations
