"""Experiment configuration."""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from packages.core.config import experiment_defaults, learner_settings, settings, simulation_config
from packages.core.errors import ExperimentConfigError
from packages.core.models import InfluenceGraph, NoiseSpec, ObsParams
from apps.model.generators import generate
from apps.model.io import load_graph


class GraphSpec(BaseModel):
    """Inline generator arguments."""
    topology: Literal["line", "tree", "ring", "random_bounded"]
    node_count: int = Field(ge=1)
    d: int = Field(default=1, ge=1)
    alpha: float = 0.4
    beta: float = 0.75
    bias: float = 0.167
    degree_cap: int = Field(default=1, ge=0)
    seed: int = 0
    noise: Optional[NoiseSpec] = None


class ExperimentConfig(BaseModel):
    """One recovery-probability sweep.

    Exactly one of ``graph`` (inline generator spec) and ``graph_file`` is set.
    A graph file carries its own observation parameters, which an explicit
    ``obs`` block overrides.
    """
    name: str
    graph: Optional[GraphSpec] = None
    graph_file: Optional[str] = None
    obs: ObsParams = Field(default_factory=ObsParams)
    sample_sizes: List[int] = Field(min_length=1)
    trials: int = Field(default=experiment_defaults.trials, ge=1)
    epsilon: Union[float, List[float]] = learner_settings.epsilon
    burn_in: int = Field(default=simulation_config.burn_in, ge=0)
    master_seed: int = Field(default=0, ge=0)
    output: Optional[str] = None
    pilot_T: int = Field(default=experiment_defaults.pilot_T, ge=2)
    epsilon_grid: List[float] = Field(default_factory=list)
    target_probability: float = Field(default=experiment_defaults.target_probability, ge=0.0, le=1.0)
    pmax_cap: Optional[int] = Field(default=None, ge=1)

    @field_validator("epsilon")
    @classmethod
    def _positive_epsilon(cls, value: Union[float, List[float]]) -> Union[float, List[float]]:
        values = value if isinstance(value, list) else [value]
        if not values or any(eps <= 0 for eps in values):
            raise ValueError("epsilon values must be > 0")
        return value

    @field_validator("epsilon_grid")
    @classmethod
    def _positive_grid(cls, value: List[float]) -> List[float]:
        if any(eps <= 0 for eps in value):
            raise ValueError("epsilon_grid values must be > 0")
        return value

    @model_validator(mode="after")
    def _check_graph(self) -> "ExperimentConfig":
        if (self.graph is None) == (self.graph_file is None):
            raise ValueError("exactly one of 'graph' and 'graph_file' must be given")
        if self.graph_file is not None and not Path(self.graph_file).exists():
            raise ValueError(f"graph_file not found: {self.graph_file}")
        d = self.graph.d if self.graph is not None else load_graph(self.graph_file)[0].d
        short = [T for T in self.sample_sizes if T < d + 1]
        if short:
            raise ValueError(f"sample sizes {short} are below d + 1 = {d + 1}")
        return self

    def epsilons(self) -> List[float]:
        return list(self.epsilon) if isinstance(self.epsilon, list) else [self.epsilon]

    def build_graph(self) -> Tuple[InfluenceGraph, ObsParams]:
        if self.graph is not None:
            spec = self.graph
            graph = generate(
                spec.topology,
                spec.node_count,
                d=spec.d,
                alpha=spec.alpha,
                beta=spec.beta,
                bias=spec.bias,
                degree_cap=spec.degree_cap,
                seed=spec.seed,
                noise=spec.noise,
            )
            return graph, self.obs
        graph, file_obs = load_graph(self.graph_file)
        return graph, (self.obs if "obs" in self.model_fields_set else file_obs)

    @property
    def graph_label(self) -> str:
        if self.graph_file is not None:
            return Path(self.graph_file).stem
        return f"{self.graph.topology}{self.graph.node_count}"

    def output_path(self) -> Path:
        if self.output:
            return Path(self.output)
        return settings.artifacts_path / "experiments" / f"{self.name}.csv"


def load_experiment_config(path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Read a JSON experiment config and apply CLI overrides.

    Relative ``graph_file`` and ``output`` entries resolve against the config's
    directory; overrides are taken as given.

    Raises:
        ExperimentConfigError: for unreadable files and invalid fields
    """
    path = Path(path)
    try:
        with open(path, "r") as f:
            document = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ExperimentConfigError(f"Cannot read experiment config {path}: {exc}") from exc

    for key in ("graph_file", "output"):
        value = document.get(key)
        if value and not Path(value).is_absolute():
            document[key] = str(path.parent / value)

    for key, value in (overrides or {}).items():
        if value is not None:
            document[key] = value

    try:
        return ExperimentConfig.model_validate(document)
    except ValidationError as exc:
        raise ExperimentConfigError(f"Invalid experiment config {path}: {exc}") from exc
