"""Shared fixtures."""

from pathlib import Path
from typing import Callable, Dict, Tuple

import numpy as np
import pytest

from packages.core.models import InfluenceGraph, NoiseSpec, ObsParams
from apps.dynamics.trajectory import Trajectory
from apps.model.generators import generate
from apps.oracle.chain import ExactChain, build_exact_chain

from .helpers import BATTERY, PROJECT_ROOT


@pytest.fixture
def single_node_graph() -> InfluenceGraph:
    return generate("line", 1)


@pytest.fixture
def two_node_graph() -> InfluenceGraph:
    """0 -> 1 with a_01 = a_11 = 0.5."""
    return generate("line", 2)


@pytest.fixture
def obs() -> ObsParams:
    return ObsParams()


@pytest.fixture
def half_noise_graph() -> InfluenceGraph:
    """Single node whose fluctuation is the constant 0.5."""
    return generate("line", 1, noise=NoiseSpec(support=[0.5], probs=[1.0]))


@pytest.fixture
def graphs_dir() -> Path:
    return PROJECT_ROOT / "config" / "graphs"


@pytest.fixture(scope="session")
def two_state_chain() -> ExactChain:
    return build_exact_chain(generate("line", 1), ObsParams())


@pytest.fixture(scope="session")
def battery_chain() -> Callable[[str], Tuple[InfluenceGraph, ObsParams, ExactChain]]:
    """Build battery chains once per session."""
    cache: Dict[str, Tuple[InfluenceGraph, ObsParams, ExactChain]] = {}

    def build(name: str):
        if name not in cache:
            builder, m_bar = BATTERY[name]
            graph = builder()
            obs = ObsParams(m_bar=m_bar)
            cache[name] = (graph, obs, build_exact_chain(graph, obs))
        return cache[name]

    return build


@pytest.fixture
def make_trajectory() -> Callable[..., Trajectory]:
    """Trajectory from explicit Y rows of a binary (m_bar = 0) process."""

    def build(y_rows, d: int = 1) -> Trajectory:
        n = np.asarray(y_rows, dtype=np.int64)
        if n.ndim == 1:
            n = n[:, None]
        return Trajectory(n=n, m=np.ones_like(n), d=d, m_bar=0)

    return build
