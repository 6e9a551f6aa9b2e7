"""Vectorized one-step update of the hidden state and observations."""

from typing import Tuple

import numpy as np

from packages.core.models import InfluenceGraph, ObsParams


class DynamicsKernel:
    """Precomputed arrays for the update equation of one (graph, obs) pair.

    A step consumes a block of uniforms shaped (|V|, 3 + m_bar), read node by
    node: column 0 draws Z_v, column 1 draws M_v, the remaining m_bar + 1
    columns are the Bernoulli trials behind N_v.
    """

    def __init__(self, graph: InfluenceGraph, obs: ObsParams):
        self.node_count = graph.node_count
        self.d = graph.d
        self.m_bar = obs.m_bar
        self.draws_per_node = 3 + obs.m_bar

        alpha = graph.vector("alpha")
        self.constant = (1.0 - alpha) * graph.beta * graph.vector("bias")
        self.noise_scale = (1.0 - alpha) * (1.0 - graph.beta)

        # coupling[v, r*|V| + u] = alpha_v * a^(r)_uv, matching history.ravel() for history[r, u]
        weights = graph.weight_tensor()
        self.coupling = alpha[:, None] * weights.transpose(1, 0, 2).reshape(self.node_count, self.d * self.node_count)

        width = max(len(node.noise.support) for node in graph.nodes)
        self.noise_values = np.zeros((self.node_count, width))
        self.noise_cdf = np.ones((self.node_count, width))
        for v, node in enumerate(graph.nodes):
            k = len(node.noise.support)
            self.noise_values[v, :k] = node.noise.support
            self.noise_values[v, k:] = node.noise.support[-1]
            cdf = np.cumsum(node.noise.probs)
            cdf[-1] = 1.0
            self.noise_cdf[v, :k] = cdf

        self.mu_c0, self.mu_c1 = obs.coefficient_arrays(self.node_count)
        self._rows = np.arange(self.node_count)
        self._trials = np.arange(self.m_bar + 1)

    def drive(self, history: np.ndarray) -> np.ndarray:
        """Deterministic part of X(t+1) excluding noise, for history[r, u] = Y_u(t - r)."""
        return self.constant + self.coupling @ history.ravel()

    def sample_noise(self, u: np.ndarray) -> np.ndarray:
        index = (u[:, None] >= self.noise_cdf).sum(axis=1)
        index = np.minimum(index, self.noise_values.shape[1] - 1)
        return self.noise_values[self._rows, index]

    def sample_counts(self, x: np.ndarray, u: np.ndarray) -> np.ndarray:
        """M = min(Poisson(mu(x)), m_bar) + 1 by inversion over the m_bar retained terms."""
        if self.m_bar == 0:
            return np.ones(self.node_count, dtype=np.int64)
        mu = np.maximum(self.mu_c0 + self.mu_c1 * x, 0.0)
        term = np.exp(-mu)
        cdf = np.empty((self.node_count, self.m_bar))
        running = term.copy()
        cdf[:, 0] = running
        for k in range(1, self.m_bar):
            term = term * mu / k
            running = running + term
            cdf[:, k] = running
        return 1 + (u[:, None] >= cdf).sum(axis=1)

    def advance(self, history: np.ndarray, uniforms: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        One update.

        Args:
            history: (d, |V|) observed fractions, most recent lag first
            uniforms: (|V|, 3 + m_bar) uniforms on [0, 1)

        Returns:
            (X, N, M) arrays for the new time step
        """
        z = self.sample_noise(uniforms[:, 0])
        x = np.clip(self.drive(history) + self.noise_scale * z, 0.0, 1.0)
        m = self.sample_counts(x, uniforms[:, 1])
        hits = (uniforms[:, 2:] < x[:, None]) & (self._trials[None, :] < m[:, None])
        n = hits.sum(axis=1)
        return x, n, m
