"""Observation alphabet: every value N/M can take."""

from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from packages.core.errors import GraphValidationError, ParamOutOfRange


class Alphabet(BaseModel):
    """Sorted reduced fractions {N/M : 1 <= M <= m_bar + 1, 0 <= N <= M}.

    Values are kept as (numerator, denominator) integer pairs so that they can
    be used as exact dictionary keys; index positions double as integer codes.
    """
    model_config = ConfigDict(frozen=True)

    m_bar: int
    pairs: Tuple[Tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def values(self) -> List[Fraction]:
        return [Fraction(n, m) for n, m in self.pairs]

    def floats(self) -> np.ndarray:
        return np.array([n / m for n, m in self.pairs], dtype=float)

    def index_of(self, value: Fraction) -> int:
        return self.pairs.index((value.numerator, value.denominator))

    def code_table(self) -> np.ndarray:
        """table[M, N] -> alphabet index, -1 where (N, M) is not an observation."""
        width = self.m_bar + 2
        table = np.full((width, width), -1, dtype=np.int64)
        lookup = {pair: i for i, pair in enumerate(self.pairs)}
        for m in range(1, width):
            for n in range(m + 1):
                value = Fraction(n, m)
                table[m, n] = lookup[(value.numerator, value.denominator)]
        return table

    def encode(self, n: np.ndarray, m: np.ndarray) -> np.ndarray:
        """Alphabet codes for arrays of observation pairs."""
        return self.code_table()[np.asarray(m), np.asarray(n)]

    def render(self, code: int) -> str:
        n, m = self.pairs[code]
        return str(n) if m == 1 else f"{n}/{m}"


def _require_m_bar(m_bar: int) -> None:
    if m_bar < 0:
        raise GraphValidationError([ParamOutOfRange(field="m_bar", detail=f"must be >= 0, got {m_bar}")])


def alphabet_size_bound(m_bar: int) -> int:
    """|chi| <= m_bar (m_bar + 1) / 2 + 2."""
    _require_m_bar(m_bar)
    return m_bar * (m_bar + 1) // 2 + 2


@lru_cache(maxsize=None)
def support_alphabet(m_bar: int) -> Alphabet:
    """Exact set of achievable Y values for a given m_bar, ascending."""
    _require_m_bar(m_bar)
    values = sorted({Fraction(n, m) for m in range(1, m_bar + 2) for n in range(m + 1)})
    return Alphabet(m_bar=m_bar, pairs=tuple((f.numerator, f.denominator) for f in values))
