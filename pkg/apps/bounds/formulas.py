"""Closed-form sample-complexity quantities."""

import math
from typing import Optional, Tuple

from packages.core.config import settings
from apps.model.alphabet import alphabet_size_bound

INT64_LIMIT = 2 ** 63


def epsilon_in_nats(epsilon: float) -> float:
    """Epsilon expressed in nats when entropies are configured in bits."""
    base = settings.log_base
    return epsilon if base is None else epsilon * math.log(base)


def pmax_bound(m_bar: int, epsilon: float) -> Tuple[float, int]:
    """
    Largest conditioning-set size the greedy search can reach.

    ``epsilon`` is in the configured entropy unit, so the bound reads
    2 log_b(m_bar (m_bar + 1) / 2 + 2) / epsilon + 1 for base b.

    Returns:
        (the bound, its floor)
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    value = 2.0 * math.log(alphabet_size_bound(m_bar)) / epsilon_in_nats(epsilon) + 1.0
    return value, int(math.floor(value))


def xi_exponent(d: int, pmax: int) -> int:
    """Exponent of |chi| in |xi| = |chi|^(1 + d (|P|max + 1))."""
    return 1 + d * (pmax + 1)


def xi_size(chi_size: int, d: int, pmax: int) -> Tuple[Optional[int], float]:
    """
    Size of the largest joint configuration space.

    Returns:
        (exact integer when below 2^63 else None, natural log of |xi|)
    """
    exponent = xi_exponent(d, pmax)
    log_xi = exponent * math.log(chi_size)
    if exponent * math.log2(chi_size) > 64:
        return None, log_xi
    exact = chi_size ** exponent
    return (exact if exact < INT64_LIMIT else None), log_xi


def l1_accuracy(epsilon: float, log_xi: float) -> float:
    """delta = epsilon^2 / (8 |xi|) with epsilon in nats, evaluated from ln|xi|."""
    return math.exp(2.0 * math.log(epsilon_in_nats(epsilon)) - math.log(8.0) - log_xi)


def log_sample_bound(
    node_count: int,
    d: int,
    pmax: int,
    log_xi: float,
    epsilon: float,
    gamma: float,
    contraction: float,
) -> float:
    """
    ln(T - d) for T >= d + (ln|V| (|P|max + 1) + ln(2|xi|/gamma)) |xi|^2 / ((1 - c) delta^2).

    ``contraction`` is c: the mixing-condition value 2(mu_bar + L) rho^(1/d),
    or |lambda*| for the spectral variant. Requires c < 1.

    With delta = epsilon^2 / (8|xi|) the factor |xi|^2 / delta^2 equals
    64 |xi|^4 / epsilon^4, kept in log space.
    """
    if not contraction < 1.0:
        raise ValueError(f"contraction must be < 1, got {contraction}")
    union_term = math.log(node_count) * (pmax + 1) + math.log(2.0) + log_xi - math.log(gamma)
    return (
        math.log(union_term)
        + math.log(64.0)
        + 4.0 * log_xi
        - 4.0 * math.log(epsilon_in_nats(epsilon))
        - math.log1p(-contraction)
    )


def sample_bound(
    node_count: int,
    d: int,
    pmax: int,
    log_xi: float,
    epsilon: float,
    gamma: float,
    contraction: float,
) -> Tuple[Optional[float], float]:
    """
    Sample count T and log10 T.

    Returns:
        (T as float or None when it overflows, log10 of T)
    """
    log_excess = log_sample_bound(node_count, d, pmax, log_xi, epsilon, gamma, contraction)
    try:
        T = d + math.exp(log_excess)
    except OverflowError:
        return None, log_excess / math.log(10.0)
    return T, math.log10(T)
