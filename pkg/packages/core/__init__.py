"""Core package initialization."""

from .config import settings, simulation_config, learner_settings, oracle_config, bounds_config, experiment_defaults
from .logging import setup_logging, set_log_level, get_logger
from .models import NoiseSpec, NodeParams, Edge, InfluenceGraph, MuOverride, ObsParams

__version__ = "0.1.0"

__all__ = [
    "settings",
    "simulation_config",
    "learner_settings",
    "oracle_config",
    "bounds_config",
    "experiment_defaults",
    "setup_logging",
    "set_log_level",
    "get_logger",
    "NoiseSpec",
    "NodeParams",
    "Edge",
    "InfluenceGraph",
    "MuOverride",
    "ObsParams",
]
