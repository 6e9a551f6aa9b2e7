"""Core configuration module using Pydantic Settings."""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class SimulationConfig(BaseModel):
    """Simulation defaults."""
    burn_in: int = Field(default=1000, ge=0)
    chunk_steps: int = Field(default=4096, ge=1)  # uniforms pre-drawn per block


class LearnerSettings(BaseModel):
    """RecGreedy defaults."""
    epsilon: float = Field(default=0.1, gt=0.0)
    tie_break: Literal["lowest_id"] = Field(default="lowest_id")


class OracleConfig(BaseModel):
    """Exact-chain limits and tolerances."""
    max_states: int = Field(default=20000, ge=1)
    full_spectrum_limit: int = Field(default=512, ge=2)
    direct_solve_limit: int = Field(default=4096, ge=2)  # larger chains use lazy power iteration
    power_max_iterations: int = Field(default=100_000, ge=1)
    row_sum_tolerance: float = Field(default=1e-12)
    stationary_tolerance: float = Field(default=1e-10)
    brute_force_tolerance: float = Field(default=1e-9)


class BoundsConfig(BaseModel):
    """Power iteration settings."""
    power_tolerance: float = Field(default=1e-10)
    power_max_iterations: int = Field(default=100_000)


class ExperimentDefaults(BaseModel):
    """Experiment harness defaults."""
    trials: int = Field(default=100, ge=1)
    pilot_T: int = Field(default=2000, ge=2)
    target_probability: float = Field(default=0.95, ge=0.0, le=1.0)
    anomaly_min_trials: int = Field(default=100, ge=1)


class Settings(BaseSettings):
    """Main application settings."""

    model_config = SettingsConfigDict(
        env_prefix="IGL_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        env_nested_delimiter="__",
        extra="ignore",
    )

    # Core settings
    debug: bool = Field(default=False)
    environment: str = Field(default="development")
    log_level: str = Field(default="INFO")

    # Worker cap for experiments (IGL_THREADS)
    threads: int = Field(default=1, ge=1)

    # Entropy unit: natural log unless switched to bits; epsilon follows the same unit
    entropy_base: Literal["e", "2"] = Field(default="e")

    # Configuration sections
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    learner: LearnerSettings = Field(default_factory=LearnerSettings)
    oracle: OracleConfig = Field(default_factory=OracleConfig)
    bounds: BoundsConfig = Field(default_factory=BoundsConfig)
    experiment: ExperimentDefaults = Field(default_factory=ExperimentDefaults)

    # Paths
    artifacts_root: str = Field(default="artifacts")
    config_root: str = Field(default="config")

    @property
    def project_root(self) -> Path:
        """Get the project root directory."""
        return Path(__file__).parent.parent.parent

    @property
    def artifacts_path(self) -> Path:
        """Get the artifacts directory path."""
        return self.project_root / self.artifacts_root

    @property
    def config_path(self) -> Path:
        """Get the config directory path."""
        return self.project_root / self.config_root

    @property
    def log_base(self) -> float | None:
        """Base handed to scipy.stats.entropy (None means natural log)."""
        return 2.0 if self.entropy_base == "2" else None


# Global settings instance
settings = Settings()

# Export commonly used configs
simulation_config = settings.simulation
learner_settings = settings.learner
oracle_config = settings.oracle
bounds_config = settings.bounds
experiment_defaults = settings.experiment
