"""Plug-in entropies and directed conditional entropies."""

import threading
from typing import Dict, FrozenSet, Iterable, Optional, Protocol, Tuple, runtime_checkable

import numpy as np
from scipy import stats

from packages.core import get_logger
from packages.core.config import settings
from packages.core.errors import TooShort
from apps.dynamics.trajectory import Trajectory

from .windows import EmpiricalDistribution, build_windows, count_rows, drop_next, window_rows

logger = get_logger(__name__)


@runtime_checkable
class EntropySource(Protocol):
    """Anything that answers H(v+ | v, Q)."""

    @property
    def node_count(self) -> int: ...

    def conditional_entropy(self, v: int, Q: Iterable[int]) -> float: ...


def entropy_of_counts(counts: np.ndarray) -> float:
    """-sum p ln p of normalized counts (configured base), with 0 ln 0 = 0."""
    if counts.size == 0 or counts.sum() == 0:
        return 0.0
    return float(stats.entropy(counts, base=settings.log_base))


def entropy(dist: EmpiricalDistribution) -> float:
    """Plug-in entropy of an empirical distribution."""
    return entropy_of_counts(dist.counts)


def directed_conditional_entropy(trajectory: Trajectory, v: int, Q: Iterable[int] = ()) -> float:
    """H^(v+ | v, Q) = H^(v+, v, Q) - H^(v, Q) from one window set."""
    joint, marginal = build_windows(trajectory, v, Q)
    return max(entropy(joint) - entropy(marginal), 0.0)


class EntropyEstimator:
    """Memoized plug-in estimates over one immutable trajectory.

    Safe for concurrent callers: the memo is guarded by a lock and values are
    pure functions of (v, Q).
    """

    def __init__(self, trajectory: Trajectory):
        if trajectory.length < trajectory.d + 1:
            raise TooShort(trajectory.length, trajectory.d + 1)
        self.trajectory = trajectory
        self.alphabet = trajectory.alphabet
        self.codes = trajectory.y_codes(self.alphabet)
        self._memo: Dict[Tuple[int, FrozenSet[int]], float] = {}
        self._lock = threading.Lock()
        self.evaluations = 0

    @property
    def node_count(self) -> int:
        return self.trajectory.node_count

    def conditional_entropy(self, v: int, Q: Iterable[int] = ()) -> float:
        key = (v, frozenset(Q))
        with self._lock:
            cached = self._memo.get(key)
        if cached is not None:
            return cached

        value = self._estimate(v, sorted(key[1]))
        with self._lock:
            self._memo[key] = value
            self.evaluations += 1
        return value

    def _estimate(self, v: int, Q: list) -> float:
        d = self.trajectory.d
        rows = window_rows(self.codes, d, v, Q)
        joint_keys, joint_counts = count_rows(rows, self.alphabet.size)
        _, marginal_counts = drop_next(joint_keys, joint_counts)
        return max(entropy_of_counts(joint_counts) - entropy_of_counts(marginal_counts), 0.0)

    def windows(self, v: int, Q: Iterable[int] = (), u: Optional[int] = None):
        return build_windows(self.trajectory, v, Q, u=u, codes=self.codes)
