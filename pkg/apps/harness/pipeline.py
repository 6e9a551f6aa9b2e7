"""Recovery-probability experiment orchestration."""

import asyncio
import math
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional

from packages.core import get_logger
from packages.core.config import experiment_defaults, settings
from packages.core.errors import TrialFailed
from packages.core.rng import derive_seed
from apps.dynamics.simulator import simulate
from apps.estimation.entropy import EntropyEstimator
from apps.learner.models import LearnerConfig
from apps.learner.rec_greedy import RecGreedyLearner
from apps.learner.scoring import edge_metrics, perfect_recovery

from .artifacts import ArtifactManager
from .config import ExperimentConfig
from .models import CurveRow, RecoveryCurve, TrialOutcome, TrialResult, TrialTask


def run_trial(task: TrialTask) -> TrialResult:
    """
    Simulate one trajectory and score every epsilon on it.

    Module-level so process pools can pickle it. All epsilons share one
    entropy memo, since the estimates depend only on the trajectory.
    """
    started = time.perf_counter()
    trajectory = simulate(task.graph, task.obs, task.T, burn_in=task.burn_in, seed=task.seed)
    estimator = EntropyEstimator(trajectory)
    outcomes = []
    for epsilon in task.epsilons:
        config = LearnerConfig(epsilon=epsilon, pmax_cap=task.pmax_cap, record_deltas=False)
        estimate = RecGreedyLearner(estimator, config, m_bar=task.obs.m_bar).learn()
        metrics = edge_metrics(estimate, task.graph)
        outcomes.append(TrialOutcome(
            epsilon=epsilon,
            success=perfect_recovery(estimate, task.graph),
            precision=metrics.precision,
            recall=metrics.recall,
            cap_warned=estimate.cap_warned,
        ))
    return TrialResult(
        T=task.T,
        trial=task.trial,
        seed=task.seed,
        runtime=time.perf_counter() - started,
        outcomes=outcomes,
    )


def flag_anomalies(rows: List[CurveRow], min_trials: Optional[int] = None) -> List[Dict[str, Any]]:
    """
    Mark drops in recovery probability between adjacent T beyond binomial noise.

    A drop larger than 3 sqrt(p (1 - p) / trials), p pooled over the pair,
    is anomalous when both points ran at least ``min_trials`` trials.
    """
    min_trials = experiment_defaults.anomaly_min_trials if min_trials is None else min_trials
    anomalies = []
    epsilons = list(dict.fromkeys(row.epsilon for row in rows))
    for epsilon in epsilons:
        points = sorted((row for row in rows if row.epsilon == epsilon), key=lambda row: row.T)
        for before, after in zip(points, points[1:]):
            if min(before.trials, after.trials) < min_trials:
                continue
            pooled = (before.successes + after.successes) / (before.trials + after.trials)
            noise = 3.0 * math.sqrt(pooled * (1.0 - pooled) / min(before.trials, after.trials))
            drop = before.recovery_prob - after.recovery_prob
            if drop > noise:
                after.anomalous = True
                anomalies.append({"epsilon": epsilon, "T_before": before.T, "T_after": after.T, "drop": drop})
    return anomalies


class ExperimentPipeline:
    """Runs a recovery sweep: simulate, learn and score per (T, trial)."""

    def __init__(
        self,
        config: ExperimentConfig,
        threads: Optional[int] = None,
        artifact_manager: Optional[ArtifactManager] = None,
    ):
        self.logger = get_logger(__name__)
        self.config = config
        self.threads = min(threads, settings.threads) if threads else settings.threads
        if threads and threads > self.threads:
            self.logger.warning(f"Requested {threads} workers; IGL_THREADS caps this run at {self.threads}")
        self.artifact_manager = artifact_manager or ArtifactManager()
        self.graph, self.obs = config.build_graph()

        self.logger.info(
            f"Initialized experiment '{config.name}' on |V|={self.graph.node_count}, d={self.graph.d}, "
            f"m_bar={self.obs.m_bar} with {self.threads} worker(s)"
        )

    def tasks(self) -> List[TrialTask]:
        """One task per (T, trial), each with its own derived seed."""
        return [
            TrialTask(
                graph=self.graph,
                obs=self.obs,
                T=T,
                trial=trial,
                seed=derive_seed(self.config.master_seed, (T, trial)),
                burn_in=self.config.burn_in,
                epsilons=self.config.epsilons(),
                pmax_cap=self.config.pmax_cap,
            )
            for T in self.config.sample_sizes
            for trial in range(self.config.trials)
        ]

    def _run_inline(self, task: TrialTask) -> TrialResult:
        try:
            return run_trial(task)
        except Exception as exc:
            raise TrialFailed(task.T, task.trial, task.seed, repr(exc)) from exc

    async def _run_pool(self, tasks: List[TrialTask]) -> List[TrialResult]:
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=min(self.threads, len(tasks))) as pool:
            futures = [loop.run_in_executor(pool, run_trial, task) for task in tasks]
            results = await asyncio.gather(*futures, return_exceptions=True)
        for task, result in zip(tasks, results):
            if isinstance(result, BaseException):
                raise TrialFailed(task.T, task.trial, task.seed, repr(result)) from result
        return results

    def aggregate(self, results: List[TrialResult]) -> RecoveryCurve:
        """Ordered reduction keyed by (epsilon, T, trial), independent of completion order."""
        results = sorted(results, key=lambda result: (result.T, result.trial))
        rows = []
        for index, epsilon in enumerate(self.config.epsilons()):
            for T in self.config.sample_sizes:
                point = [result for result in results if result.T == T]
                outcomes = [result.outcomes[index] for result in point]
                rows.append(CurveRow(
                    epsilon=epsilon,
                    T=T,
                    trials=len(point),
                    successes=sum(outcome.success for outcome in outcomes),
                    mean_runtime=sum(result.runtime for result in point) / len(point),
                    mean_precision=sum(outcome.precision for outcome in outcomes) / len(point),
                    mean_recall=sum(outcome.recall for outcome in outcomes) / len(point),
                    cap_warnings=sum(outcome.cap_warned for outcome in outcomes),
                ))

        anomalies = flag_anomalies(rows)
        for anomaly in anomalies:
            self.logger.warning(
                f"Recovery dropped by {anomaly['drop']:.3f} from T={anomaly['T_before']} "
                f"to T={anomaly['T_after']} (epsilon={anomaly['epsilon']})"
            )
        return RecoveryCurve(rows=rows, metadata=self.metadata(), anomalies=anomalies)

    def metadata(self) -> Dict[str, Any]:
        spec = self.config.graph
        return {
            "name": self.config.name,
            "graph": self.config.graph_label,
            "topology": self.graph.topology if spec is None else spec.topology,
            "V": self.graph.node_count,
            "d": self.graph.d,
            "m_bar": self.obs.m_bar,
            "master_seed": self.config.master_seed,
        }

    async def run(self, save_artifacts: bool = True) -> Dict[str, Any]:
        """
        Run every trial and aggregate the recovery curve.

        Args:
            save_artifacts: write the CSV and its sidecars

        Returns:
            Dictionary with the curve, saved paths and metadata

        Raises:
            TrialFailed: when any trial raises; carries T, trial index and seed
        """
        start_time = time.perf_counter()
        tasks = self.tasks()
        self.logger.info(
            f"Running {len(tasks)} trials over T={self.config.sample_sizes} "
            f"for epsilon={self.config.epsilons()}"
        )

        if self.threads > 1 and len(tasks) > 1:
            results = await self._run_pool(tasks)
        else:
            results = [self._run_inline(task) for task in tasks]

        curve = self.aggregate(results)
        paths: Dict[str, str] = {}
        if save_artifacts:
            paths = self.artifact_manager.save_curve(curve, self.config)

        elapsed = time.perf_counter() - start_time
        self.logger.info(f"Experiment '{self.config.name}' finished in {elapsed:.1f}s")
        return {"curve": curve, "paths": paths, "metadata": curve.metadata, "elapsed": elapsed}


async def run_experiment(config: ExperimentConfig, save_artifacts: bool = True) -> RecoveryCurve:
    """Convenience wrapper returning only the curve."""
    result = await ExperimentPipeline(config).run(save_artifacts=save_artifacts)
    return result["curve"]


