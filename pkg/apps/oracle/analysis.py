"""Stationary law, spectrum and mixing diagnostics of an exact chain."""

from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel
from scipy import sparse
from scipy.sparse import csgraph
from scipy.sparse import linalg as sparse_linalg

from packages.core import get_logger
from packages.core.config import oracle_config
from packages.core.errors import InputValidationError, NoConvergence, NotIrreducible, StateSpaceTooLarge
from packages.core.models import InfluenceGraph, ObsParams
from apps.bounds.spectral import influence_radius

from .chain import ExactChain

logger = get_logger(__name__)


def closed_classes(P: sparse.csr_matrix) -> Tuple[np.ndarray, np.ndarray]:
    """
    Strongly connected classes with no outgoing transitions.

    Returns:
        (labels of the closed classes, class label of every state)
    """
    count, labels = csgraph.connected_components(P, directed=True, connection="strong")
    coo = P.tocoo()
    positive = coo.data > 0
    source = labels[coo.row[positive]]
    target = labels[coo.col[positive]]
    leaky = np.unique(source[source != target])
    return np.setdiff1d(np.arange(count), leaky), labels


def _residual(P: sparse.csr_matrix, pi: np.ndarray) -> float:
    return float(np.abs(P.T @ pi - pi).max())


def stationary(chain: ExactChain) -> np.ndarray:
    """
    Unique stationary distribution of the chain.

    The chain must have exactly one closed communicating class; transient
    states get zero mass. Small chains solve the fixed-point system with a
    normalization row, larger ones run power iteration on (P + I) / 2.

    Raises:
        NotIrreducible: when there is more than one closed class
        NoConvergence: when the residual stays above tolerance
    """
    P = chain.P
    closed, labels = closed_classes(P)
    if len(closed) != 1:
        raise NotIrreducible(len(closed))

    members = np.flatnonzero(labels == closed[0])
    restricted = P[members][:, members].tocsr()
    n = len(members)
    tolerance = oracle_config.stationary_tolerance

    if n <= oracle_config.direct_solve_limit:
        system = (restricted.T - sparse.identity(n, format="csr")).tocsr()
        keep = np.ones(n)
        keep[-1] = 0.0
        normalization = sparse.csr_matrix((np.ones(n), (np.full(n, n - 1), np.arange(n))), shape=(n, n))
        system = (sparse.diags(keep) @ system + normalization).tocsc()
        rhs = np.zeros(n)
        rhs[-1] = 1.0
        local = sparse_linalg.spsolve(system, rhs)
    else:
        local = np.full(n, 1.0 / n)
    local = np.maximum(local, 0.0)
    local /= local.sum()

    residual = _residual(restricted, local)
    iterations = 0
    previous = residual
    while residual > tolerance:
        if iterations >= oracle_config.power_max_iterations:
            raise NoConvergence(residual, previous, iterations)
        local = 0.5 * (local + restricted.T @ local)
        local /= local.sum()
        iterations += 1
        if iterations % 10 == 0:
            previous, residual = residual, _residual(restricted, local)

    pi = np.zeros(chain.size)
    pi[members] = local
    logger.debug(
        f"Stationary law over {n}/{chain.size} recurrent states, residual {_residual(P, pi):.3g}, "
        f"{iterations} refinement iterations"
    )
    return pi


def spectrum(chain: ExactChain) -> np.ndarray:
    """Eigenvalues sorted by decreasing modulus; full for small chains, leading ones otherwise."""
    S = chain.size
    if S <= oracle_config.full_spectrum_limit:
        values = np.linalg.eigvals(chain.dense())
    else:
        k = min(6, S - 2)
        values = sparse_linalg.eigs(
            chain.P.astype(float), k=k, which="LM", return_eigenvectors=False,
            v0=np.random.default_rng(0).random(S), tol=1e-12,
        )
    return values[np.argsort(-np.abs(values), kind="stable")]


def second_eigenvalue(chain: ExactChain) -> float:
    """|lambda*|: modulus of the second-largest-modulus eigenvalue of P."""
    values = chain.eigenvalues
    if len(values) < 2:
        return 0.0
    return float(np.abs(values[1]))


def tv_distance_profile(chain: ExactChain, t_values: Iterable[int]) -> np.ndarray:
    """max over start states of the total-variation distance between P^t(s, .) and pi."""
    t_values = [int(t) for t in t_values]
    if chain.size > oracle_config.full_spectrum_limit:
        raise StateSpaceTooLarge(chain.size, oracle_config.full_spectrum_limit)
    if any(t < 0 for t in t_values):
        raise InputValidationError("t values must be >= 0")

    P = chain.dense()
    pi = chain.pi
    powers = np.eye(chain.size)
    distances = {}
    for t in range(max(t_values, default=0) + 1):
        if t in t_values:
            distances[t] = 0.5 * np.abs(powers - pi[None, :]).sum(axis=1).max()
        powers = powers @ P
    return np.array([distances[t] for t in t_values])


def fit_geometric_rate(t_values: Sequence[int], distances: Sequence[float]) -> float:
    """Rate r of dist(t) ~ C r^t by a least-squares line through log dist."""
    t = np.asarray(t_values, dtype=float)
    dist = np.asarray(distances, dtype=float)
    usable = dist > 0
    if usable.sum() < 2:
        raise InputValidationError("Need at least two positive distances to fit a rate")
    slope, _ = np.polyfit(t[usable], np.log(dist[usable]), 1)
    return float(np.exp(slope))


class SpectralBoundReport(BaseModel):
    """Measured |lambda*| next to the analytic contraction 2(mu_bar + L) rho^(1/d)."""
    lambda_star: float
    condition_value: float
    rho: float
    mu_bar: float
    L: float
    d: int
    holds: bool


def spectral_bound_report(
    chain: ExactChain,
    graph: Optional[InfluenceGraph] = None,
    obs: Optional[ObsParams] = None,
) -> SpectralBoundReport:
    """Compare the chain's |lambda*| with the analytic bound; a finding, never a failure."""
    graph = graph or chain.graph
    obs = obs or chain.obs
    if graph is None or obs is None:
        raise InputValidationError("spectral_bound_report needs the graph and observation parameters")

    rho, _ = influence_radius(graph)
    mu_bar = obs.mu_bar(graph.node_count)
    lipschitz = obs.lipschitz(graph.node_count)
    condition = 2.0 * (mu_bar + lipschitz) * rho ** (1.0 / graph.d)
    lambda_star = second_eigenvalue(chain)
    holds = lambda_star <= condition + 1e-12
    if not holds:
        logger.info(f"|lambda*|={lambda_star:.6g} exceeds analytic bound {condition:.6g}")
    return SpectralBoundReport(
        lambda_star=lambda_star,
        condition_value=condition,
        rho=rho,
        mu_bar=mu_bar,
        L=lipschitz,
        d=graph.d,
        holds=holds,
    )
