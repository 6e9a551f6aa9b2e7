"""Core data models and schemas."""

from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class NoiseSpec(BaseModel):
    """Finite-support distribution of the fluctuation Z_v on [0, 1]."""
    model_config = ConfigDict(frozen=True)

    support: List[float] = Field(default_factory=lambda: [0.0, 1.0], min_length=1)
    probs: List[float] = Field(default_factory=lambda: [0.5, 0.5], min_length=1)

    @property
    def mean(self) -> float:
        return float(np.dot(self.support, self.probs))

    @property
    def minimum(self) -> float:
        return min(self.support)

    @property
    def maximum(self) -> float:
        return max(self.support)


class NodeParams(BaseModel):
    """Per-node dynamics parameters."""
    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0)
    alpha: float  # openness
    bias: float  # inner bias l_v
    noise: NoiseSpec = Field(default_factory=NoiseSpec)
    zbar: Optional[float] = None  # defaults to the noise mean

    @property
    def noise_mean(self) -> float:
        return self.zbar if self.zbar is not None else self.noise.mean


class Edge(BaseModel):
    """Directed edge u -> v with one weight per lag r = 0..d-1."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    source: int = Field(alias="from", ge=0)
    target: int = Field(alias="to", ge=0)
    weights: List[float]


class InfluenceGraph(BaseModel):
    """Directed weighted influence graph with memory depth d.

    Weight a^(r)_uv lives on the edge (u, v) at index r. Self-loops are
    ordinary edges with source == target.
    """
    model_config = ConfigDict(frozen=True)

    node_count: int = Field(ge=1)
    d: int = Field(ge=1)
    beta: float
    nodes: List[NodeParams]
    edges: List[Edge]
    topology: str = "custom"

    @property
    def node_ids(self) -> List[int]:
        return list(range(self.node_count))

    def node(self, v: int) -> NodeParams:
        return self.nodes[v]

    def neighborhood(self, v: int) -> List[int]:
        """N_v: in-neighbours of v, excluding v itself."""
        return sorted({e.source for e in self.edges if e.target == v and e.source != v})

    def neighborhoods(self) -> Dict[int, List[int]]:
        return {v: self.neighborhood(v) for v in self.node_ids}

    def weight_tensor(self) -> np.ndarray:
        """Array W of shape (d, |V|, |V|) with W[r, v, u] = a^(r)_uv."""
        weights = np.zeros((self.d, self.node_count, self.node_count))
        for edge in self.edges:
            weights[:, edge.target, edge.source] += np.asarray(edge.weights, dtype=float)
        return weights

    def vector(self, attr: str) -> np.ndarray:
        return np.array([getattr(node, attr) for node in self.nodes], dtype=float)

    def noise_means(self) -> np.ndarray:
        return np.array([node.noise_mean for node in self.nodes], dtype=float)


class MuOverride(BaseModel):
    """Per-node affine Poisson rate."""
    model_config = ConfigDict(frozen=True)

    c0: float
    c1: float


class ObsParams(BaseModel):
    """Observation mechanism: M = min(Poisson(mu_v(X)), m_bar) + 1.

    mu_v(x) = max(c0 + c1 * x, 0), shared across nodes unless overridden.
    """
    model_config = ConfigDict(frozen=True)

    m_bar: int = Field(default=0, ge=0)
    mu_c0: float = Field(default=0.1, ge=0.0)
    mu_c1: float = 0.5
    mu_overrides: Dict[int, MuOverride] = Field(default_factory=dict)

    @field_validator("mu_overrides")
    @classmethod
    def _check_overrides(cls, value: Dict[int, MuOverride]) -> Dict[int, MuOverride]:
        for node, spec in value.items():
            if spec.c0 < 0:
                raise ValueError(f"mu override for node {node} has c0 < 0")
        return value

    def coefficients(self, v: int) -> Tuple[float, float]:
        spec = self.mu_overrides.get(v)
        if spec is None:
            return self.mu_c0, self.mu_c1
        return spec.c0, spec.c1

    def coefficient_arrays(self, node_count: int) -> Tuple[np.ndarray, np.ndarray]:
        pairs = [self.coefficients(v) for v in range(node_count)]
        return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])

    def mu(self, x: float, v: int = 0) -> float:
        c0, c1 = self.coefficients(v)
        return max(c0 + c1 * x, 0.0)

    def lipschitz(self, node_count: int = 1) -> float:
        """L: exact Lipschitz constant of the affine specs."""
        return max(abs(self.coefficients(v)[1]) for v in range(max(node_count, 1)))

    def mu_bar(self, node_count: int = 1) -> float:
        """max_v sup_{x in [0,1]} mu_v(x); affine, so an endpoint attains it."""
        return max(max(self.mu(0.0, v), self.mu(1.0, v)) for v in range(max(node_count, 1)))
