"""Closed-form bounds: spectral radius, conditioning-set size and sample complexity."""

from .formulas import epsilon_in_nats, l1_accuracy, log_sample_bound, pmax_bound, sample_bound, xi_exponent, xi_size
from .report import BoundReport, sample_complexity
from .spectral import closed_form_radius, influence_matrices, influence_radius, power_iteration, spectral_radius

__all__ = [
    "epsilon_in_nats",
    "l1_accuracy",
    "log_sample_bound",
    "pmax_bound",
    "sample_bound",
    "xi_exponent",
    "xi_size",
    "BoundReport",
    "sample_complexity",
    "closed_form_radius",
    "influence_matrices",
    "influence_radius",
    "power_iteration",
    "spectral_radius",
]
