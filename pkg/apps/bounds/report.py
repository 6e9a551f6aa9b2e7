"""Sample-complexity report for one graph and observation model."""

import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from packages.core import get_logger
from packages.core.errors import InputValidationError
from packages.core.models import InfluenceGraph, ObsParams
from apps.model.alphabet import support_alphabet

from .formulas import epsilon_in_nats, l1_accuracy, pmax_bound, sample_bound, xi_size
from .spectral import influence_radius

logger = get_logger(__name__)


class BoundReport(BaseModel):
    """Every quantity entering the sample-complexity bound.

    ``T_bound`` and ``log10_T_bound`` are set only when the mixing condition
    holds; ``xi_size`` is None when |xi| does not fit in 63 bits.
    """
    epsilon: float
    gamma: float
    d: int
    node_count: int
    rho: float
    rho_per_lag: List[float]
    mu_bar: float
    L: float
    condition_value: float
    pmax: float
    pmax_cap: int
    chi_size: int
    xi_size: Optional[int] = None
    log_xi_size: float
    delta: float
    log_delta: float
    T_bound: Optional[float] = None
    log10_T_bound: Optional[float] = None
    applicable: bool

    # Variant with the chain's measured |lambda*| in place of the analytic contraction
    lambda_star: Optional[float] = None
    spectral_T_bound: Optional[float] = None
    spectral_log10_T_bound: Optional[float] = None

    empirical_T: Optional[int] = Field(default=None, ge=1)
    looseness_log10: Optional[float] = None

    def rows(self) -> List[Tuple[str, str]]:
        """(quantity, value) pairs for human-readable tables."""

        def fmt(value) -> str:
            if value is None:
                return "-"
            if isinstance(value, bool):
                return "yes" if value else "no"
            if isinstance(value, float):
                return f"{value:.6g}"
            return str(value)

        rows = [
            ("rho", fmt(self.rho)),
            ("mu_bar", fmt(self.mu_bar)),
            ("L", fmt(self.L)),
            ("condition 2(mu_bar+L)rho^(1/d)", fmt(self.condition_value)),
            ("applicable", fmt(self.applicable)),
            ("pmax", fmt(self.pmax)),
            ("pmax cap", fmt(self.pmax_cap)),
            ("|chi|", fmt(self.chi_size)),
            ("|xi|", fmt(self.xi_size) if self.xi_size is not None else f"e^{self.log_xi_size:.6g}"),
            ("delta", fmt(self.delta) if self.delta > 0 else f"e^{self.log_delta:.6g}"),
            ("T bound", fmt(self.T_bound)),
            ("log10 T bound", fmt(self.log10_T_bound)),
        ]
        if self.lambda_star is not None:
            rows += [
                ("|lambda*|", fmt(self.lambda_star)),
                ("spectral log10 T bound", fmt(self.spectral_log10_T_bound)),
            ]
        if self.empirical_T is not None:
            rows += [
                ("empirical T", fmt(self.empirical_T)),
                ("looseness (log10)", fmt(self.looseness_log10)),
            ]
        return rows


def sample_complexity(
    graph: InfluenceGraph,
    obs: ObsParams,
    epsilon: float,
    gamma: float,
    lambda_star: Optional[float] = None,
    empirical_T: Optional[int] = None,
) -> BoundReport:
    """
    Evaluate the mixing condition and the sample-count bound.

    Args:
        graph: validated influence graph
        obs: observation parameters
        epsilon: entropy-gap parameter (> 0)
        gamma: failure probability in (0, 1)
        lambda_star: optional measured second-eigenvalue modulus of the chain
        empirical_T: optional observed sample threshold to compare against

    Returns:
        BoundReport; overflowing quantities are reported in log space
    """
    if epsilon <= 0:
        raise InputValidationError(f"epsilon must be > 0, got {epsilon}")
    if not 0.0 < gamma < 1.0:
        raise InputValidationError(f"gamma must be in (0, 1), got {gamma}")

    n, d = graph.node_count, graph.d
    rho, per_lag = influence_radius(graph)
    mu_bar = obs.mu_bar(n)
    lipschitz = obs.lipschitz(n)
    condition = 2.0 * (mu_bar + lipschitz) * rho ** (1.0 / d)

    pmax, pmax_cap = pmax_bound(obs.m_bar, epsilon)
    chi_size = support_alphabet(obs.m_bar).size
    xi_exact, log_xi = xi_size(chi_size, d, pmax_cap)
    log_delta = 2.0 * math.log(epsilon_in_nats(epsilon)) - math.log(8.0) - log_xi
    delta = l1_accuracy(epsilon, log_xi)

    applicable = condition < 1.0
    T_bound = log10_T = None
    if applicable:
        T_bound, log10_T = sample_bound(n, d, pmax_cap, log_xi, epsilon, gamma, condition)
    else:
        logger.info(f"Mixing condition fails: 2(mu_bar+L)rho^(1/d) = {condition:.6g} >= 1")

    spectral_T = spectral_log10 = None
    if lambda_star is not None and lambda_star < 1.0:
        spectral_T, spectral_log10 = sample_bound(n, d, pmax_cap, log_xi, epsilon, gamma, lambda_star)

    looseness = None
    if empirical_T is not None and log10_T is not None:
        looseness = log10_T - math.log10(empirical_T)

    return BoundReport(
        epsilon=epsilon,
        gamma=gamma,
        d=d,
        node_count=n,
        rho=rho,
        rho_per_lag=per_lag,
        mu_bar=mu_bar,
        L=lipschitz,
        condition_value=condition,
        pmax=pmax,
        pmax_cap=pmax_cap,
        chi_size=chi_size,
        xi_size=xi_exact,
        log_xi_size=log_xi,
        delta=delta,
        log_delta=log_delta,
        T_bound=T_bound,
        log10_T_bound=log10_T,
        applicable=applicable,
        lambda_star=lambda_star,
        spectral_T_bound=spectral_T,
        spectral_log10_T_bound=spectral_log10,
        empirical_T=empirical_T,
        looseness_log10=looseness,
    )
