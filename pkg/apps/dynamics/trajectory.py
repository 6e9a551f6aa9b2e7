"""Observed trajectories and their CSV persistence."""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from packages.core import get_logger
from packages.core.errors import InputValidationError
from apps.model.alphabet import Alphabet, support_alphabet

logger = get_logger(__name__)

INITIALIZATION = "virtual pre-history Y=zbar, then burn-in"


class Trajectory(BaseModel):
    """Observation pairs (N_v(t), M_v(t)) for t = 0..T-1, arrays shaped (T, |V|)."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: np.ndarray
    m: np.ndarray
    d: int
    m_bar: int
    seed: Optional[int] = None
    burn_in: int = 0
    graph_digest: Optional[str] = None
    initialization: str = INITIALIZATION

    @property
    def length(self) -> int:
        return int(self.n.shape[0])

    @property
    def node_count(self) -> int:
        return int(self.n.shape[1])

    @property
    def alphabet(self) -> Alphabet:
        return support_alphabet(self.m_bar)

    def y_values(self) -> np.ndarray:
        return self.n / self.m

    def y_codes(self, alphabet: Optional[Alphabet] = None) -> np.ndarray:
        """Alphabet indices of Y_v(t); exact, no float keys."""
        return (alphabet or self.alphabet).encode(self.n, self.m)

    def head(self, length: int) -> "Trajectory":
        return self.model_copy(update={"n": self.n[:length], "m": self.m[:length]})

    def metadata(self) -> Dict[str, Any]:
        return {
            "T": self.length,
            "node_count": self.node_count,
            "d": self.d,
            "m_bar": self.m_bar,
            "seed": self.seed,
            "burn_in": self.burn_in,
            "graph_digest": self.graph_digest,
            "initialization": self.initialization,
        }

    def to_frame(self) -> pd.DataFrame:
        """Long format: one row per (t, node), t ascending then node ascending."""
        T, V = self.n.shape
        return pd.DataFrame({
            "t": np.repeat(np.arange(T), V),
            "node": np.tile(np.arange(V), T),
            "N": self.n.ravel(),
            "M": self.m.ravel(),
        })


def _sidecar(path: Path) -> Path:
    return path.with_suffix(".meta.json")


def save_trajectory(trajectory: Trajectory, path: Union[str, Path]) -> Dict[str, str]:
    """Write `t,node,N,M` CSV plus the metadata sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    trajectory.to_frame().to_csv(path, index=False)
    meta_path = _sidecar(path)
    with open(meta_path, "w") as f:
        json.dump(trajectory.metadata(), f, indent=2)
    logger.info(f"Saved trajectory T={trajectory.length} to {path}")
    return {"csv": str(path), "metadata": str(meta_path)}


def load_trajectory(path: Union[str, Path], d: Optional[int] = None, m_bar: Optional[int] = None) -> Trajectory:
    """Read a trajectory CSV; d and m_bar come from the sidecar unless given."""
    path = Path(path)
    meta: Dict[str, Any] = {}
    if _sidecar(path).exists():
        with open(_sidecar(path), "r") as f:
            meta = json.load(f)

    frame = pd.read_csv(path)
    missing = {"t", "node", "N", "M"} - set(frame.columns)
    if missing:
        raise InputValidationError(f"Trajectory file {path} lacks columns {sorted(missing)}")

    frame = frame.sort_values(["t", "node"])
    T = int(frame["t"].max()) + 1
    V = int(frame["node"].max()) + 1
    if len(frame) != T * V:
        raise InputValidationError(f"Trajectory file {path} has {len(frame)} rows, expected {T * V}")
    n = frame["N"].to_numpy(dtype=np.int64).reshape(T, V)
    m = frame["M"].to_numpy(dtype=np.int64).reshape(T, V)

    depth = d if d is not None else meta.get("d")
    cap = m_bar if m_bar is not None else meta.get("m_bar", int(m.max()) - 1)
    if depth is None:
        raise InputValidationError(f"Memory depth d unknown for {path}; pass it explicitly")
    if (m < 1).any() or (m > cap + 1).any() or (n < 0).any() or (n > m).any():
        raise InputValidationError(f"Trajectory file {path} holds pairs outside 0 <= N <= M <= m_bar+1")

    return Trajectory(
        n=n,
        m=m,
        d=int(depth),
        m_bar=int(cap),
        seed=meta.get("seed"),
        burn_in=int(meta.get("burn_in", 0)),
        graph_digest=meta.get("graph_digest"),
        initialization=meta.get("initialization", INITIALIZATION),
    )
