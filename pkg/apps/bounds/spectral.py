"""Influence matrices and their Perron roots."""

import math
from typing import List, Optional, Tuple

import numpy as np

from packages.core import get_logger
from packages.core.config import bounds_config
from packages.core.errors import InputValidationError, NoConvergence
from packages.core.models import InfluenceGraph

logger = get_logger(__name__)


def influence_matrices(graph: InfluenceGraph) -> List[np.ndarray]:
    """The d matrices with entries [A(r)]_vu = alpha_v * a^(r)_uv."""
    alpha = graph.vector("alpha")
    return [alpha[:, None] * lag for lag in graph.weight_tensor()]


def _check_matrix(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InputValidationError(f"Expected a square matrix, got shape {matrix.shape}")
    if (matrix < 0).any():
        raise InputValidationError("Spectral radius is defined here for nonnegative matrices only")
    return matrix


def closed_form_radius(matrix: np.ndarray) -> float:
    """Largest root of the characteristic polynomial for 1x1 and 2x2 matrices."""
    matrix = _check_matrix(matrix)
    n = matrix.shape[0]
    if n == 1:
        return float(matrix[0, 0])
    if n != 2:
        raise InputValidationError(f"Closed form only covers n <= 2, got {n}")
    trace = matrix[0, 0] + matrix[1, 1]
    det = matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0]
    # (a - d)^2 + 4bc >= 0 for nonnegative entries
    discriminant = max(trace * trace - 4.0 * det, 0.0)
    return float((trace + math.sqrt(discriminant)) / 2.0)


def power_iteration(
    matrix: np.ndarray,
    tolerance: Optional[float] = None,
    max_iterations: Optional[int] = None,
) -> Tuple[float, int]:
    """
    Perron root by power iteration on matrix + I from the all-ones vector.

    The unit shift keeps the Perron vector and makes every nonnegative matrix
    aperiodic, so periodic graphs (rings) converge.

    Returns:
        (spectral radius, iterations used)

    Raises:
        NoConvergence: when consecutive Rayleigh quotients still differ by more
            than the relative tolerance after ``max_iterations``
    """
    matrix = _check_matrix(matrix)
    tolerance = bounds_config.power_tolerance if tolerance is None else tolerance
    max_iterations = bounds_config.power_max_iterations if max_iterations is None else max_iterations

    shifted = matrix + np.eye(matrix.shape[0])
    x = np.ones(matrix.shape[0])
    previous = math.nan
    quotient = math.nan
    for iteration in range(1, max_iterations + 1):
        y = shifted @ x
        quotient = float(x @ y / (x @ x))
        x = y / np.linalg.norm(y)
        if abs(quotient - previous) <= tolerance * abs(quotient):
            return max(quotient - 1.0, 0.0), iteration
        previous = quotient
    raise NoConvergence(quotient - 1.0, previous - 1.0, max_iterations)


def spectral_radius(
    matrix: np.ndarray,
    tolerance: Optional[float] = None,
    max_iterations: Optional[int] = None,
) -> float:
    """
    Perron root of a square nonnegative matrix.

    Matrices up to 2x2 use the characteristic polynomial, cross-checked against
    power iteration; larger ones use power iteration alone.
    """
    matrix = _check_matrix(matrix)
    if matrix.shape[0] == 0:
        return 0.0
    if matrix.shape[0] <= 2:
        exact = closed_form_radius(matrix)
        iterated, _ = power_iteration(matrix, tolerance, max_iterations)
        if abs(iterated - exact) > 1e-8:
            logger.warning(f"Power iteration {iterated:.12g} disagrees with closed form {exact:.12g}")
        return exact
    rho, iterations = power_iteration(matrix, tolerance, max_iterations)
    logger.debug(f"Power iteration converged to {rho:.12g} in {iterations} iterations")
    return rho


def influence_radius(graph: InfluenceGraph) -> Tuple[float, List[float]]:
    """rho(A) = max over lags of the per-lag Perron roots, with the per-lag values."""
    per_lag = [spectral_radius(matrix) for matrix in influence_matrices(graph)]
    return max(per_lag), per_lag
