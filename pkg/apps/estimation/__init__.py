"""Empirical window distributions and plug-in directed conditional entropies."""

from .windows import EmpiricalDistribution, build_windows, count_rows, drop_next, key_layout, window_rows
from .entropy import EntropyEstimator, EntropySource, directed_conditional_entropy, entropy, entropy_of_counts

__all__ = [
    "EmpiricalDistribution",
    "build_windows",
    "count_rows",
    "drop_next",
    "key_layout",
    "window_rows",
    "EntropyEstimator",
    "EntropySource",
    "directed_conditional_entropy",
    "entropy",
    "entropy_of_counts",
]
