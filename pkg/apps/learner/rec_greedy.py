"""RecGreedy(epsilon) neighbourhood learner."""

import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Set

from packages.core import get_logger
from apps.bounds.formulas import pmax_bound
from apps.dynamics.trajectory import Trajectory
from apps.estimation.entropy import EntropyEstimator, EntropySource

from .models import LearnerConfig, NeighborhoodEstimate, NodeEstimate, RoundRecord, TraceStep


# drops closer than this count as ties and go to the lowest id
TIE_TOLERANCE = 1e-12


def default_pmax_cap(m_bar: int, epsilon: float) -> int:
    """Integer cap on the conditioning-set size implied by epsilon."""
    return max(pmax_bound(m_bar, epsilon)[1], 1)


class RecGreedyLearner:
    """Greedy search for parent sets by directed conditional entropy drops.

    Each outer round grows a working set U from the current estimate by
    repeatedly adding the candidate with the largest drop while the drop
    exceeds epsilon / 2. Only the last node added in a round joins the
    estimate. The search for a node stops after a round that adds nothing.
    """

    def __init__(self, source: EntropySource, config: Optional[LearnerConfig] = None, m_bar: int = 0):
        self.logger = get_logger(__name__)
        self.source = source
        self.config = config or LearnerConfig()
        self.pmax_cap = self.config.pmax_cap or default_pmax_cap(m_bar, self.config.epsilon)

    def learn_node(self, v: int) -> NodeEstimate:
        """
        Run the outer and inner loops for one node.

        Args:
            v: target node

        Returns:
            Parent set with per-round trace
        """
        node_count = self.source.node_count
        threshold = self.config.threshold
        estimate: Set[int] = set()
        history: List[RoundRecord] = []
        max_cond_set = 0
        cap_warnings = 0

        for round_index in range(node_count + 1):
            working = set(estimate)
            last_node: Optional[int] = None
            steps: List[TraceStep] = []

            while True:
                candidates = [k for k in range(node_count) if k != v and k not in working]
                if not candidates:
                    exit_reason = "exhausted"
                    break
                if len(working) + 1 > self.pmax_cap:
                    exit_reason = "cap"
                    cap_warnings += 1
                    self.logger.warning(
                        f"Node {v}: conditioning set would exceed pmax_cap={self.pmax_cap} in round {round_index}"
                    )
                    break

                base = self.source.conditional_entropy(v, working)
                deltas = {k: base - self.source.conditional_entropy(v, working | {k}) for k in candidates}
                best = max(deltas.values())
                u = min(k for k in candidates if deltas[k] >= best - TIE_TOLERANCE)
                accepted = deltas[u] > threshold
                steps.append(TraceStep(
                    step=len(steps),
                    set_size=len(working),
                    candidate=u,
                    delta=deltas[u],
                    accepted=accepted,
                    deltas=deltas if self.config.record_deltas else {},
                ))
                if not accepted:
                    exit_reason = "threshold"
                    break
                working.add(u)
                last_node = u
                max_cond_set = max(max_cond_set, len(working))

            if last_node is not None:
                estimate.add(last_node)
            history.append(RoundRecord(
                round=round_index,
                exit_reason=exit_reason,
                last_node=last_node,
                added=last_node is not None,
                steps=steps,
            ))
            if last_node is None:
                break

        return NodeEstimate(
            node=v,
            parents=sorted(estimate),
            rounds=len(history),
            max_cond_set=max_cond_set,
            cap_warnings=cap_warnings,
            history=history,
        )

    def learn(self) -> NeighborhoodEstimate:
        """Learn every node; nodes are independent so they may run on a thread pool."""
        started = time.perf_counter()
        nodes = range(self.source.node_count)
        if self.config.workers > 1:
            with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                results = list(pool.map(self.learn_node, nodes))
        else:
            results = [self.learn_node(v) for v in nodes]

        estimate = NeighborhoodEstimate(epsilon=self.config.epsilon, pmax_cap=self.pmax_cap, nodes=results)
        self.logger.debug(
            f"RecGreedy(eps={self.config.epsilon}) learned {len(estimate.edges())} edges "
            f"in {time.perf_counter() - started:.3f}s"
        )
        return estimate


def rec_greedy(trajectory: Trajectory, config: Optional[LearnerConfig] = None) -> NeighborhoodEstimate:
    """
    Learn the influence graph from one trajectory with plug-in entropies.

    Raises:
        TooShort: when the trajectory has fewer than d + 1 rows
    """
    estimator = EntropyEstimator(trajectory)
    return RecGreedyLearner(estimator, config, m_bar=trajectory.m_bar).learn()
