"""Exception hierarchy and validation violation records."""

from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel


class WeightSumViolation(BaseModel):
    """Incoming weights of a node do not sum to one."""
    kind: Literal["WeightSumViolation"] = "WeightSumViolation"
    v: int
    sum: float

    def describe(self) -> str:
        return f"WeightSumViolation(v={self.v}, sum={self.sum:.12g})"


class MissingSelfLoop(BaseModel):
    """Node has no (v, v) edge."""
    kind: Literal["MissingSelfLoop"] = "MissingSelfLoop"
    v: int

    def describe(self) -> str:
        return f"MissingSelfLoop(v={self.v})"


class ParamOutOfRange(BaseModel):
    """A scalar or vector parameter is outside its domain."""
    kind: Literal["ParamOutOfRange"] = "ParamOutOfRange"
    field: str
    v: Optional[int] = None
    detail: str = ""

    def describe(self) -> str:
        where = f", v={self.v}" if self.v is not None else ""
        extra = f": {self.detail}" if self.detail else ""
        return f"ParamOutOfRange(field={self.field}{where}){extra}"


GraphViolation = Union[WeightSumViolation, MissingSelfLoop, ParamOutOfRange]


class InfluenceGraphError(Exception):
    """Base error for the package."""


class InputValidationError(InfluenceGraphError):
    """Rejected input; the CLI exits with status 1."""


class GraphValidationError(InputValidationError):
    """Every invariant violation found in one graph."""

    def __init__(self, violations: List[GraphViolation]):
        self.violations = list(violations)
        summary = "; ".join(item.describe() for item in self.violations)
        super().__init__(f"{len(self.violations)} graph violation(s): {summary}")

    def report(self) -> List[Dict[str, Any]]:
        return [item.model_dump() for item in self.violations]


class InvalidTopologyParams(InputValidationError):
    """Generator arguments do not describe a graph."""


class TooShort(InputValidationError):
    """Trajectory or requested length is shorter than the operation needs."""

    def __init__(self, length: int, required: int, what: str = "T"):
        self.length = length
        self.required = required
        super().__init__(f"TooShort: {what}={length} but at least {required} required")


class StateSpaceTooLarge(InputValidationError):
    """Exact chain would exceed the state guard."""

    def __init__(self, states: int, limit: int):
        self.states = states
        self.limit = limit
        super().__init__(f"StateSpaceTooLarge: S={states} exceeds limit {limit}")


class ExperimentConfigError(InputValidationError):
    """Experiment configuration is inconsistent or references missing files."""


class NotIrreducible(InfluenceGraphError):
    """Chain has more than one closed communicating class."""

    def __init__(self, closed_classes: int):
        self.closed_classes = closed_classes
        super().__init__(f"NotIrreducible: {closed_classes} closed communicating classes")


class NoConvergence(InfluenceGraphError):
    """Power iteration exhausted its iteration budget."""

    def __init__(self, last: float, previous: float, iterations: int):
        self.last = last
        self.previous = previous
        self.iterations = iterations
        super().__init__(
            f"NoConvergence after {iterations} iterations: "
            f"last Rayleigh quotients {previous:.15g}, {last:.15g}"
        )


class TrialFailed(InfluenceGraphError):
    """A single experiment trial raised; the experiment is aborted."""

    def __init__(self, T: int, trial: int, seed: int, cause: str):
        self.T = T
        self.trial = trial
        self.seed = seed
        self.cause = cause
        super().__init__(f"Trial failed (T={T}, trial={trial}, seed={seed}): {cause}")


class NotReached(InfluenceGraphError):
    """No swept sample size reached the target recovery probability."""

    def __init__(self, best_T: Optional[int], best_prob: float, target: float):
        self.best_T = best_T
        self.best_prob = best_prob
        self.target = target
        super().__init__(
            f"NotReached: target {target} not reached; best T={best_T} with p={best_prob:.4f}"
        )
