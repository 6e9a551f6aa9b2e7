"""Simulation of the influence dynamics."""

import time
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from packages.core import get_logger
from packages.core.config import simulation_config
from packages.core.errors import TooShort
from packages.core.models import InfluenceGraph, ObsParams
from packages.core.rng import make_rng
from apps.model.io import graph_digest

from .kernel import DynamicsKernel
from .trajectory import Trajectory

logger = get_logger(__name__)


class State(BaseModel):
    """Hidden state plus the last d observation pairs (most recent first).

    Rows at index >= ``filled`` are virtual pre-history and read as ``prior``.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    x: np.ndarray
    n_history: np.ndarray
    m_history: np.ndarray
    filled: int
    prior: np.ndarray

    def y_history(self) -> np.ndarray:
        history = np.broadcast_to(self.prior, self.n_history.shape).astype(float)
        real = np.arange(self.n_history.shape[0]) < self.filled
        history[real] = self.n_history[real] / self.m_history[real]
        return history


def initial_state(graph: InfluenceGraph) -> State:
    """Empty history; every lag reads as the noise mean zbar."""
    prior = graph.noise_means()
    shape = (graph.d, graph.node_count)
    expected_x = (1 - graph.vector("alpha")) * (
        (1 - graph.beta) * prior + graph.beta * graph.vector("bias")
    ) + graph.vector("alpha") * prior
    return State(
        x=expected_x,
        n_history=np.zeros(shape, dtype=np.int64),
        m_history=np.zeros(shape, dtype=np.int64),
        filled=0,
        prior=prior,
    )


def step(
    state: State,
    graph: InfluenceGraph,
    obs: ObsParams,
    rng: np.random.Generator,
    kernel: Optional[DynamicsKernel] = None,
) -> Tuple[State, np.ndarray]:
    """
    Advance one time step.

    Args:
        state: current state
        graph: influence graph
        obs: observation parameters
        rng: random generator (consumes one (|V|, 3 + m_bar) uniform block)
        kernel: precomputed kernel for repeated calls

    Returns:
        New state and the (|V|, 2) row of (N, M) pairs
    """
    kernel = kernel or DynamicsKernel(graph, obs)
    uniforms = rng.random((graph.node_count, kernel.draws_per_node))
    x, n, m = kernel.advance(state.y_history(), uniforms)

    n_history = np.roll(state.n_history, 1, axis=0)
    m_history = np.roll(state.m_history, 1, axis=0)
    n_history[0] = n
    m_history[0] = m
    new_state = State(
        x=x,
        n_history=n_history,
        m_history=m_history,
        filled=min(state.filled + 1, graph.d),
        prior=state.prior,
    )
    return new_state, np.stack([n, m], axis=1)


def simulate(
    graph: InfluenceGraph,
    obs: ObsParams,
    T: int,
    burn_in: Optional[int] = None,
    seed: int = 0,
) -> Trajectory:
    """
    Generate a trajectory of T recorded steps after ``burn_in`` discarded ones.

    Uniforms are drawn in chunks that consume the generator exactly as
    repeated ``step`` calls would, so both paths give identical output.

    Args:
        graph: validated influence graph
        obs: observation parameters
        T: number of recorded rows (>= d)
        burn_in: discarded steps (settings default when None)
        seed: stream seed

    Returns:
        Trajectory with metadata
    """
    if T < graph.d:
        raise TooShort(T, graph.d)
    burn_in = simulation_config.burn_in if burn_in is None else burn_in
    if burn_in < 0:
        raise TooShort(burn_in, 0, what="burn_in")

    started = time.perf_counter()
    kernel = DynamicsKernel(graph, obs)
    rng = make_rng(seed)
    V = graph.node_count

    history = np.tile(graph.noise_means(), (graph.d, 1))
    n_out = np.empty((T, V), dtype=np.int64)
    m_out = np.empty((T, V), dtype=np.int64)

    total = burn_in + T
    chunk = simulation_config.chunk_steps
    t_global = 0
    while t_global < total:
        size = min(chunk, total - t_global)
        block = rng.random((size, V, kernel.draws_per_node))
        for i in range(size):
            _, n, m = kernel.advance(history, block[i])
            history[1:] = history[:-1]
            history[0] = n / m
            t = t_global + i - burn_in
            if t >= 0:
                n_out[t] = n
                m_out[t] = m
        t_global += size

    elapsed = time.perf_counter() - started
    logger.debug(f"Simulated T={T} (burn_in={burn_in}, seed={seed}) for |V|={V} in {elapsed:.2f}s")

    return Trajectory(
        n=n_out,
        m=m_out,
        d=graph.d,
        m_bar=obs.m_bar,
        seed=seed,
        burn_in=burn_in,
        graph_digest=graph_digest(graph, obs),
    )
