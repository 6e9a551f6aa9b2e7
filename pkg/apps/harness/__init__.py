"""Experiment harness: configs, recovery sweeps, thresholds and the CLI."""

from .config import ExperimentConfig, GraphSpec, load_experiment_config
from .models import CurveRow, RecoveryCurve, ThresholdResult, TrialResult, TrialTask, TuneResult
from .pipeline import ExperimentPipeline, flag_anomalies, run_experiment, run_trial
from .thresholds import find_sample_threshold, threshold_from_curve, tune_epsilon
from .artifacts import ArtifactManager

__all__ = [
    "ExperimentConfig",
    "GraphSpec",
    "load_experiment_config",
    "CurveRow",
    "RecoveryCurve",
    "ThresholdResult",
    "TrialResult",
    "TrialTask",
    "TuneResult",
    "ExperimentPipeline",
    "flag_anomalies",
    "run_experiment",
    "run_trial",
    "find_sample_threshold",
    "threshold_from_curve",
    "tune_epsilon",
    "ArtifactManager",
]
