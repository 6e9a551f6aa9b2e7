"""CSV dumps of exact chains for inspection."""

from pathlib import Path
from typing import Dict, Union

import pandas as pd

from packages.core import get_logger

from .chain import ExactChain

logger = get_logger(__name__)


def transition_frame(chain: ExactChain) -> pd.DataFrame:
    """Sparse triplets ``source,target,probability`` in row-major order."""
    coo = chain.P.tocoo()
    frame = pd.DataFrame({"source": coo.row, "target": coo.col, "probability": coo.data})
    return frame.sort_values(["source", "target"], kind="stable").reset_index(drop=True)


def stationary_frame(chain: ExactChain) -> pd.DataFrame:
    return pd.DataFrame({
        "state": range(chain.size),
        "history": [chain.render_state(s) for s in range(chain.size)],
        "probability": chain.pi,
    })


def dump_chain(chain: ExactChain, directory: Union[str, Path]) -> Dict[str, str]:
    """Write ``transitions.csv`` and ``stationary.csv`` under ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    saved = {}
    for name, frame in (("transitions", transition_frame(chain)), ("stationary", stationary_frame(chain))):
        path = directory / f"{name}.csv"
        frame.to_csv(path, index=False, float_format="%.17g")
        saved[name] = str(path)
        logger.info(f"Saved {name}: {path}")
    return saved
