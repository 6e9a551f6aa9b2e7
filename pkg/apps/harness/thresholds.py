"""Sample thresholds and epsilon tuning on top of recovery sweeps."""

from typing import Optional

from pydantic import ValidationError

from packages.core import get_logger
from packages.core.errors import ExperimentConfigError, NotReached
from packages.core.rng import PILOT, derive_seed

from .config import ExperimentConfig
from .models import RecoveryCurve, ThresholdResult, TuneResult
from .pipeline import ExperimentPipeline

logger = get_logger(__name__)


def threshold_from_curve(curve: RecoveryCurve, target: float) -> ThresholdResult:
    """
    Smallest swept T whose recovery probability reaches ``target``.

    Rows keep their sweep order, so among epsilons tied at that T the earliest wins.

    Raises:
        NotReached: with the best probability seen and the smallest T achieving it
    """
    reached = [row for row in curve.rows if row.recovery_prob >= target]
    if reached:
        best = min(reached, key=lambda row: row.T)
        return ThresholdResult(T=best.T, epsilon=best.epsilon, recovery_prob=best.recovery_prob, target=target)

    if not curve.rows:
        raise NotReached(None, 0.0, target)
    best = max(curve.rows, key=lambda row: (row.recovery_prob, -row.T))
    raise NotReached(best.T, best.recovery_prob, target)


async def find_sample_threshold(
    config: ExperimentConfig,
    target_probability: Optional[float] = None,
    threads: Optional[int] = None,
) -> ThresholdResult:
    """Run the sweep and report the smallest T reaching the target probability."""
    target = config.target_probability if target_probability is None else target_probability
    result = await ExperimentPipeline(config, threads=threads).run()
    threshold = threshold_from_curve(result["curve"], target)
    logger.info(f"Threshold for '{config.name}': T={threshold.T} at epsilon={threshold.epsilon}")
    return threshold


async def tune_epsilon(config: ExperimentConfig, threads: Optional[int] = None) -> TuneResult:
    """
    Grid search over ``epsilon_grid`` scored by recovery probability at ``pilot_T``.

    Pilot trials draw from a seed stream separate from the main sweep. Ties go
    to the earliest grid entry.
    """
    if not config.epsilon_grid:
        raise ExperimentConfigError(f"Experiment '{config.name}' has no epsilon_grid to tune over")

    try:
        pilot = ExperimentConfig.model_validate({
            **config.model_dump(exclude_unset=True),
            "name": f"{config.name}-pilot",
            "sample_sizes": [config.pilot_T],
            "epsilon": list(config.epsilon_grid),
            "master_seed": derive_seed(config.master_seed, (PILOT,)),
        })
    except ValidationError as exc:
        raise ExperimentConfigError(f"Invalid pilot configuration for '{config.name}': {exc}") from exc
    result = await ExperimentPipeline(pilot, threads=threads).run(save_artifacts=False)
    rows = result["curve"].rows
    best = max(range(len(rows)), key=lambda index: (rows[index].recovery_prob, -index))
    scores = {repr(row.epsilon): row.recovery_prob for row in rows}
    logger.info(f"Tuned epsilon={rows[best].epsilon} at pilot T={config.pilot_T}: {scores}")
    return TuneResult(epsilon=rows[best].epsilon, pilot_T=config.pilot_T, scores=scores)
