"""Exact transition matrix of the stacked d-history observation chain."""

import time
from typing import Optional

import numpy as np
from scipy import sparse, stats

from packages.core import get_logger
from packages.core.config import oracle_config
from packages.core.errors import InfluenceGraphError, InputValidationError, StateSpaceTooLarge
from packages.core.models import InfluenceGraph, ObsParams
from apps.dynamics.kernel import DynamicsKernel
from apps.model.alphabet import Alphabet, support_alphabet
from apps.model.validation import require_interior, validate_graph

logger = get_logger(__name__)


def count_probabilities(mu: np.ndarray, m_bar: int) -> np.ndarray:
    """
    Law of M = min(Poisson(mu), m_bar) + 1.

    Returns:
        Array with a trailing axis of length m_bar + 1; entry k is P(M = k + 1).
        The last entry lumps the upper tail P(Poisson >= m_bar).
    """
    mu = np.asarray(mu, dtype=float)
    law = np.empty(mu.shape + (m_bar + 1,))
    for k in range(m_bar):
        law[..., k] = stats.poisson.pmf(k, mu)
    law[..., m_bar] = stats.poisson.sf(m_bar - 1, mu)
    return law


def observation_law(x: np.ndarray, mu: np.ndarray, alphabet: Alphabet) -> np.ndarray:
    """
    P(Y = chi_c | X = x) for every alphabet code c.

    Args:
        x: hidden states, any shape
        mu: Poisson rates, same shape as x
        alphabet: observation alphabet

    Returns:
        Array of shape x.shape + (|chi|,)
    """
    m_bar = alphabet.m_bar
    table = alphabet.code_table()
    counts = count_probabilities(mu, m_bar)
    law = np.zeros(np.shape(x) + (alphabet.size,))
    for m in range(1, m_bar + 2):
        for n in range(m + 1):
            law[..., table[m, n]] += counts[..., m - 1] * stats.binom.pmf(n, m, x)
    return law


class ExactChain:
    """Markov chain on joint d-histories of all nodes.

    State s lists, for each node v and lag r, the alphabet code of Y_v(t - r);
    ``digits[s, v, r]`` holds it. States are numbered in mixed radix |chi| with
    position v * d + r, most significant first. ``kernels[s, v, c]`` is the
    probability that node v next observes code c from state s; nodes are
    conditionally independent given s, so P is the product of the kernels.
    """

    def __init__(
        self,
        P: sparse.csr_matrix,
        digits: np.ndarray,
        alphabet: Optional[Alphabet],
        kernels: Optional[np.ndarray] = None,
        graph: Optional[InfluenceGraph] = None,
        obs: Optional[ObsParams] = None,
    ):
        self.P = P.tocsr()
        self.digits = digits
        self.alphabet = alphabet
        self.kernels = kernels
        self.graph = graph
        self.obs = obs
        self._pi: Optional[np.ndarray] = None
        self._eigenvalues: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return int(self.P.shape[0])

    @property
    def node_count(self) -> int:
        return int(self.digits.shape[1])

    @property
    def d(self) -> int:
        return int(self.digits.shape[2])

    @property
    def states(self) -> np.ndarray:
        return self.digits

    @property
    def pi(self) -> np.ndarray:
        if self._pi is None:
            from .analysis import stationary

            self._pi = stationary(self)
        return self._pi

    @property
    def eigenvalues(self) -> np.ndarray:
        if self._eigenvalues is None:
            from .analysis import spectrum

            self._eigenvalues = spectrum(self)
        return self._eigenvalues

    def dense(self) -> np.ndarray:
        return self.P.toarray()

    def render_state(self, s: int) -> str:
        """Histories per node, most recent lag first, e.g. ``0,1|1/2,1``."""
        if self.alphabet is None:
            return str(s)
        return "|".join(
            ",".join(self.alphabet.render(int(c)) for c in self.digits[s, v])
            for v in range(self.node_count)
        )

    @classmethod
    def from_matrix(cls, P: np.ndarray, alphabet: Optional[Alphabet] = None) -> "ExactChain":
        """
        Wrap an explicit row-stochastic matrix as a one-node, one-lag chain.

        With an alphabet of matching size the rows double as the node's
        observation kernel, so exact entropies are available.
        """
        P = np.asarray(P, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise InputValidationError(f"Transition matrix must be square, got {P.shape}")
        if np.abs(P.sum(axis=1) - 1.0).max() > oracle_config.row_sum_tolerance or (P < 0).any():
            raise InputValidationError("Transition matrix rows must be probability vectors")
        S = P.shape[0]
        if alphabet is None and S == 2:
            alphabet = support_alphabet(0)
        kernels = P[:, None, :] if alphabet is not None and alphabet.size == S else None
        digits = np.arange(S, dtype=np.int64).reshape(S, 1, 1)
        return cls(sparse.csr_matrix(P), digits, alphabet if kernels is not None else None, kernels)


def state_digits(alphabet_size: int, node_count: int, d: int) -> np.ndarray:
    """(S, |V|, d) digits of every state in index order."""
    positions = node_count * d
    grid = np.indices((alphabet_size,) * positions).reshape(positions, -1).T
    return grid.reshape(-1, node_count, d).astype(np.int64)


def build_exact_chain(graph: InfluenceGraph, obs: ObsParams, max_states: Optional[int] = None) -> ExactChain:
    """
    Enumerate P exactly for a tiny instance.

    For each state the hidden X_v is computed per noise outcome from the
    lagged observations; the observation law mixes the truncated-Poisson
    count with Binomial(M, X) over the noise support.

    Raises:
        StateSpaceTooLarge: when |chi|^(d |V|) exceeds the guard
        GraphValidationError: when X can reach 0 or 1 on the noise support
    """
    validate_graph(graph)
    require_interior(graph)
    alphabet = support_alphabet(obs.m_bar)
    K, V, d = alphabet.size, graph.node_count, graph.d
    limit = oracle_config.max_states if max_states is None else max_states
    S = K ** (V * d)
    if S > limit:
        raise StateSpaceTooLarge(S, limit)

    started = time.perf_counter()
    digits = state_digits(K, V, d)
    values = alphabet.floats()

    # history rows ordered (r, u) to match the kernel coupling layout
    history = values[digits].transpose(0, 2, 1).reshape(S, d * V)
    dynamics = DynamicsKernel(graph, obs)
    drive = dynamics.constant + history @ dynamics.coupling.T

    support_width = max(len(node.noise.support) for node in graph.nodes)
    noise_values = np.zeros((V, support_width))
    noise_probs = np.zeros((V, support_width))
    for v, node in enumerate(graph.nodes):
        k = len(node.noise.support)
        noise_values[v, :k] = node.noise.support
        noise_probs[v, :k] = np.asarray(node.noise.probs) / np.sum(node.noise.probs)

    x = drive[:, :, None] + dynamics.noise_scale[None, :, None] * noise_values[None, :, :]
    mu = np.maximum(dynamics.mu_c0[None, :, None] + dynamics.mu_c1[None, :, None] * x, 0.0)
    law = observation_law(x, mu, alphabet)  # (S, V, J, K)
    kernels = np.einsum("svjk,vj->svk", law, noise_probs)

    # next state: lag 0 takes the new code, older lags shift by one
    weights = K ** np.arange(V * d - 1, -1, -1, dtype=np.int64).reshape(V, d)
    base = (digits[:, :, :-1] * weights[None, :, 1:]).sum(axis=(1, 2))
    combos = np.indices((K,) * V).reshape(V, -1).T
    offsets = combos @ weights[:, 0]

    columns = base[:, None] + offsets[None, :]
    probs = np.ones((S, combos.shape[0]))
    for v in range(V):
        probs *= kernels[:, v, :][:, combos[:, v]]

    rows = np.repeat(np.arange(S), combos.shape[0])
    P = sparse.csr_matrix((probs.ravel(), (rows, columns.ravel())), shape=(S, S))

    row_error = float(np.abs(np.asarray(P.sum(axis=1)).ravel() - 1.0).max())
    if row_error > oracle_config.row_sum_tolerance:
        raise InfluenceGraphError(f"Exact chain rows deviate from 1 by {row_error:.3g}")

    logger.info(f"Built exact chain with S={S} states ({P.nnz} transitions) in {time.perf_counter() - started:.2f}s")
    return ExactChain(P, digits, alphabet, kernels, graph=graph, obs=obs)
