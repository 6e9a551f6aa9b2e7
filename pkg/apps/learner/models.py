"""Learner configuration and estimate records."""

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field

from packages.core.config import learner_settings

ExitReason = Literal["threshold", "exhausted", "cap"]


class LearnerConfig(BaseModel):
    """RecGreedy(epsilon) settings; the acceptance threshold is epsilon / 2."""
    epsilon: float = Field(default=learner_settings.epsilon, gt=0.0)
    pmax_cap: Optional[int] = Field(default=None, ge=1)  # None: conditioning-set size bound for epsilon
    tie_break: Literal["lowest_id"] = Field(default=learner_settings.tie_break)
    workers: int = Field(default=1, ge=1)
    record_deltas: bool = True

    @property
    def threshold(self) -> float:
        return self.epsilon / 2.0


class TraceStep(BaseModel):
    """One inner-loop evaluation: the argmax candidate and its entropy drop."""
    step: int
    set_size: int
    candidate: int
    delta: float
    accepted: bool
    deltas: Dict[int, float] = Field(default_factory=dict)


class RoundRecord(BaseModel):
    """One outer round of the greedy search for a node."""
    round: int
    exit_reason: ExitReason
    last_node: Optional[int] = None
    added: bool = False
    steps: List[TraceStep] = Field(default_factory=list)


class NodeEstimate(BaseModel):
    """Learned parent set of one node with its search trace."""
    node: int
    parents: List[int]
    rounds: int
    max_cond_set: int
    cap_warnings: int = 0
    history: List[RoundRecord] = Field(default_factory=list)


class NeighborhoodEstimate(BaseModel):
    """Per-node parent sets T^(v) for the whole graph."""
    epsilon: float
    pmax_cap: int
    nodes: List[NodeEstimate]

    @property
    def parents(self) -> Dict[int, List[int]]:
        return {item.node: item.parents for item in self.nodes}

    @property
    def max_cond_set(self) -> int:
        return max((item.max_cond_set for item in self.nodes), default=0)

    @property
    def cap_warned(self) -> bool:
        return any(item.cap_warnings for item in self.nodes)

    def edges(self) -> List[tuple]:
        return sorted((u, item.node) for item in self.nodes for u in item.parents)
