"""Trial and curve records."""

from typing import Any, Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from packages.core.models import InfluenceGraph, ObsParams

CURVE_COLUMNS = [
    "graph", "topology", "V", "d", "m_bar", "epsilon", "T", "trials", "successes", "recovery_prob", "master_seed",
]
DIAGNOSTIC_COLUMNS = [
    "epsilon", "T", "trials", "mean_runtime", "mean_precision", "mean_recall", "cap_warnings", "anomalous",
]


class TrialTask(BaseModel):
    """Everything one trial needs; picklable for process pools."""
    model_config = ConfigDict(frozen=True)

    graph: InfluenceGraph
    obs: ObsParams
    T: int
    trial: int
    seed: int
    burn_in: int
    epsilons: List[float]
    pmax_cap: Optional[int] = None


class TrialOutcome(BaseModel):
    epsilon: float
    success: bool
    precision: float
    recall: float
    cap_warned: bool = False


class TrialResult(BaseModel):
    T: int
    trial: int
    seed: int
    runtime: float
    outcomes: List[TrialOutcome]


class CurveRow(BaseModel):
    """Aggregate over the trials of one (epsilon, T) point."""
    epsilon: float
    T: int
    trials: int = Field(ge=1)
    successes: int = Field(ge=0)
    mean_runtime: float
    mean_precision: float
    mean_recall: float
    cap_warnings: int = 0
    anomalous: bool = False

    @property
    def recovery_prob(self) -> float:
        return self.successes / self.trials


class RecoveryCurve(BaseModel):
    """Recovery probability per swept (epsilon, T) with the experiment echo."""
    rows: List[CurveRow]
    metadata: Dict[str, Any] = Field(default_factory=dict)
    anomalies: List[Dict[str, Any]] = Field(default_factory=list)

    def for_epsilon(self, epsilon: float) -> List[CurveRow]:
        return [row for row in self.rows if row.epsilon == epsilon]

    def to_frame(self) -> pd.DataFrame:
        """Rows of the fixed CSV schema; columns depend only on seeds and counts."""
        meta = self.metadata
        records = [
            {
                "graph": meta.get("graph"),
                "topology": meta.get("topology"),
                "V": meta.get("V"),
                "d": meta.get("d"),
                "m_bar": meta.get("m_bar"),
                "epsilon": row.epsilon,
                "T": row.T,
                "trials": row.trials,
                "successes": row.successes,
                "recovery_prob": row.recovery_prob,
                "master_seed": meta.get("master_seed"),
            }
            for row in self.rows
        ]
        return pd.DataFrame(records, columns=CURVE_COLUMNS)

    def diagnostics_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{column: getattr(row, column) for column in DIAGNOSTIC_COLUMNS} for row in self.rows],
            columns=DIAGNOSTIC_COLUMNS,
        )


class ThresholdResult(BaseModel):
    """Smallest swept T reaching the target recovery probability."""
    T: int
    epsilon: float
    recovery_prob: float
    target: float


class TuneResult(BaseModel):
    """Epsilon grid search scored at the pilot sample size."""
    epsilon: float
    pilot_T: int
    scores: Dict[str, float]
