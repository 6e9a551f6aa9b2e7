"""Persistence of learned neighbourhoods."""

import json
from pathlib import Path
from typing import Any, Dict, Union

import pandas as pd

from packages.core import get_logger

from .models import NeighborhoodEstimate

logger = get_logger(__name__)


def estimate_document(estimate: NeighborhoodEstimate, include_trace: bool = False) -> Dict[str, Any]:
    """JSON-ready document of parent sets, optionally with the full search trace."""
    document: Dict[str, Any] = {
        "epsilon": estimate.epsilon,
        "pmax_cap": estimate.pmax_cap,
        "parents": {str(item.node): item.parents for item in estimate.nodes},
        "max_cond_set": estimate.max_cond_set,
    }
    if include_trace:
        document["trace"] = [item.model_dump(mode="json") for item in estimate.nodes]
    return document


def save_estimate(estimate: NeighborhoodEstimate, path: Union[str, Path], include_trace: bool = False) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(estimate_document(estimate, include_trace), f, indent=2)
    logger.info(f"Saved estimate: {path}")
    return path


def summary_frame(estimate: NeighborhoodEstimate) -> pd.DataFrame:
    """Rows ``node,parents,rounds,max_cond_set`` with parents joined by ';'."""
    return pd.DataFrame(
        [
            {
                "node": item.node,
                "parents": ";".join(str(u) for u in item.parents),
                "rounds": item.rounds,
                "max_cond_set": item.max_cond_set,
            }
            for item in estimate.nodes
        ],
        columns=["node", "parents", "rounds", "max_cond_set"],
    )


def save_summary(estimate: NeighborhoodEstimate, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    summary_frame(estimate).to_csv(path, index=False)
    logger.info(f"Saved summary: {path}")
    return path
