"""Exact small-instance oracle: transition matrix, stationary law, spectrum, entropies."""

from .chain import ExactChain, build_exact_chain, count_probabilities, observation_law, state_digits
from .analysis import (
    SpectralBoundReport,
    closed_classes,
    fit_geometric_rate,
    second_eigenvalue,
    spectral_bound_report,
    spectrum,
    stationary,
    tv_distance_profile,
)
from .entropy import (
    EntropyGap,
    IndependenceViolation,
    OracleEntropySource,
    brute_force_neighborhoods,
    entropy_gap,
    exact_directed_conditional_entropy,
    independence_violations,
)
from .artifacts import dump_chain, stationary_frame, transition_frame

__all__ = [
    "ExactChain",
    "build_exact_chain",
    "count_probabilities",
    "observation_law",
    "state_digits",
    "SpectralBoundReport",
    "closed_classes",
    "fit_geometric_rate",
    "second_eigenvalue",
    "spectral_bound_report",
    "spectrum",
    "stationary",
    "tv_distance_profile",
    "EntropyGap",
    "IndependenceViolation",
    "OracleEntropySource",
    "brute_force_neighborhoods",
    "entropy_gap",
    "exact_directed_conditional_entropy",
    "independence_violations",
    "dump_chain",
    "stationary_frame",
    "transition_frame",
]
