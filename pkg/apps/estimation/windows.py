"""Empirical distributions over d-history windows."""

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from packages.core.errors import InputValidationError, TooShort
from apps.dynamics.trajectory import Trajectory
from apps.model.alphabet import Alphabet

# Largest mixed-radix code packed into one int64
_CODE_LIMIT = 2 ** 62


def key_layout(v: int, Q: Iterable[int], d: int, u: Optional[int] = None, with_next: bool = True) -> List[str]:
    """Column names of a HistoryKey: next value, then v, Q ascending, u; lags most recent first."""
    nodes = [v] + sorted(Q) + ([u] if u is not None else [])
    columns = [f"y{v}+"] if with_next else []
    columns += [f"y{node}(t-{r})" for node in nodes for r in range(d)]
    return columns


class EmpiricalDistribution(BaseModel):
    """Counts over exact history keys.

    ``keys`` holds one row of alphabet indices per observed configuration.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    keys: np.ndarray
    counts: np.ndarray
    total: int
    alphabet: Alphabet
    columns: List[str]

    @property
    def support_size(self) -> int:
        return int(self.counts.shape[0])

    def key_tuples(self) -> List[Tuple[int, ...]]:
        return [tuple(int(c) for c in row) for row in self.keys]

    def as_dict(self) -> Dict[Tuple[int, ...], int]:
        return dict(zip(self.key_tuples(), (int(c) for c in self.counts)))

    def probabilities(self) -> Dict[Tuple[Fraction, ...], Fraction]:
        """Exact p(k) = count / total keyed by rational values."""
        values = self.alphabet.values
        return {
            tuple(values[c] for c in key): Fraction(int(count), self.total)
            for key, count in zip(self.key_tuples(), self.counts)
        }

    def marginal(self) -> "EmpiricalDistribution":
        """Drop the leading (next-step) coordinate, summing counts."""
        keys, counts = drop_next(self.keys, self.counts)
        return self.model_copy(update={"keys": keys, "counts": counts, "columns": self.columns[1:]})

    def to_frame(self) -> pd.DataFrame:
        """Debug dump with keys rendered as rationals."""
        rendered = [
            "|".join(self.alphabet.render(int(c)) for c in row)
            for row in self.keys
        ]
        return pd.DataFrame({"key": rendered, "count": self.counts})


def count_rows(rows: np.ndarray, radix: int) -> Tuple[np.ndarray, np.ndarray]:
    width = rows.shape[1]
    if radix ** width < _CODE_LIMIT:
        powers = radix ** np.arange(width - 1, -1, -1, dtype=np.int64)
        codes = rows @ powers
        _, first, counts = np.unique(codes, return_index=True, return_counts=True)
        return rows[first], counts.astype(np.int64)
    keys, counts = np.unique(rows, axis=0, return_counts=True)
    return keys, counts.astype(np.int64)


def drop_next(keys: np.ndarray, counts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Marginalize joint counts over the leading coordinate without re-counting windows."""
    reduced, inverse = np.unique(keys[:, 1:], axis=0, return_inverse=True)
    summed = np.bincount(inverse.ravel(), weights=counts, minlength=reduced.shape[0])
    return reduced, np.rint(summed).astype(np.int64)


def window_rows(codes: np.ndarray, d: int, v: int, Q: Iterable[int], u: Optional[int] = None) -> np.ndarray:
    """(T-d, width) rows: Y_v(t+1) then the lagged values, for t = d-1..T-2."""
    T = codes.shape[0]
    nodes = [v] + sorted(Q) + ([u] if u is not None else [])
    times = np.arange(d - 1, T - 1)
    columns = [codes[times + 1, v]]
    for node in nodes:
        for r in range(d):
            columns.append(codes[times - r, node])
    return np.stack(columns, axis=1)


def build_windows(
    trajectory: Trajectory,
    v: int,
    Q: Iterable[int] = (),
    u: Optional[int] = None,
    codes: Optional[np.ndarray] = None,
) -> Tuple[EmpiricalDistribution, EmpiricalDistribution]:
    """
    Joint distribution of (y_v+, y_{v,Q}^(d)) and its marginal over y_{v,Q}^(d).

    Args:
        trajectory: observed trajectory
        v: target node
        Q: conditioning set (must not contain v)
        u: optional extra node appended after Q
        codes: precomputed alphabet codes of the trajectory

    Returns:
        (joint, marginal), both over the same T - d windows
    """
    Q = sorted(set(Q))
    if v in Q or (u is not None and (u == v or u in Q)):
        raise InputValidationError(f"Conditioning set {Q} (u={u}) must not contain v={v}")
    d = trajectory.d
    if trajectory.length < d + 1:
        raise TooShort(trajectory.length, d + 1)

    alphabet = trajectory.alphabet
    codes = trajectory.y_codes(alphabet) if codes is None else codes
    rows = window_rows(codes, d, v, Q, u)
    keys, counts = count_rows(rows, alphabet.size)

    joint = EmpiricalDistribution(
        keys=keys,
        counts=counts,
        total=int(rows.shape[0]),
        alphabet=alphabet,
        columns=key_layout(v, Q, d, u),
    )
    return joint, joint.marginal()
