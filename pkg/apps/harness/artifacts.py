"""Persistence of recovery curves and their sidecars."""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from packages.core import get_logger
from apps.dynamics.trajectory import INITIALIZATION

from .config import ExperimentConfig
from .models import RecoveryCurve


def sidecar_paths(output: Path) -> Dict[str, Path]:
    """``<out>.diagnostics.csv`` and ``<out>.meta.json`` next to the curve CSV."""
    return {
        "diagnostics": output.with_suffix(".diagnostics.csv"),
        "metadata": output.with_suffix(".meta.json"),
    }


class ArtifactManager:
    """Writes experiment CSVs; the main CSV depends only on seeds and counts."""

    def __init__(self, base_path: Optional[Union[str, Path]] = None):
        self.logger = get_logger(__name__)
        self.base_path = Path(base_path) if base_path else None

    def resolve(self, config: ExperimentConfig) -> Path:
        output = config.output_path()
        if self.base_path is not None and not output.is_absolute():
            output = self.base_path / output
        return output

    def save_curve(self, curve: RecoveryCurve, config: ExperimentConfig) -> Dict[str, str]:
        """
        Save a recovery curve with diagnostics and metadata sidecars.

        Args:
            curve: aggregated curve
            config: experiment configuration echoed into the metadata

        Returns:
            Dictionary of saved file paths
        """
        output = self.resolve(config)
        output.parent.mkdir(parents=True, exist_ok=True)
        sidecars = sidecar_paths(output)

        curve.to_frame().to_csv(output, index=False)
        curve.diagnostics_frame().to_csv(sidecars["diagnostics"], index=False)
        with open(sidecars["metadata"], "w") as f:
            json.dump(self._metadata(curve, config), f, indent=2, default=str)

        self.logger.info(f"Saved recovery curve: {output}")
        return {"csv": str(output), **{key: str(path) for key, path in sidecars.items()}}

    def _metadata(self, curve: RecoveryCurve, config: ExperimentConfig) -> Dict[str, Any]:
        return {
            **curve.metadata,
            "config": config.model_dump(mode="json"),
            "initialization": INITIALIZATION,
            "seed_derivation": "SeedSequence(master_seed, spawn_key=(T, trial))",
            "anomalies": curve.anomalies,
        }

