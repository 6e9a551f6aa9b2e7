"""Graph document persistence (JSON)."""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Tuple, Union

from pydantic import ValidationError

from packages.core import get_logger
from packages.core.errors import GraphValidationError, ParamOutOfRange
from packages.core.models import InfluenceGraph, ObsParams

from .validation import validate_graph

logger = get_logger(__name__)


def graph_to_document(graph: InfluenceGraph, obs: ObsParams) -> Dict[str, Any]:
    """Structured-text form of a graph and its observation parameters."""
    document: Dict[str, Any] = {
        "node_count": graph.node_count,
        "d": graph.d,
        "beta": graph.beta,
        "topology": graph.topology,
        "nodes": [
            {
                "id": node.id,
                "alpha": node.alpha,
                "bias": node.bias,
                "zbar": node.zbar,
                "noise": {"support": list(node.noise.support), "probs": list(node.noise.probs)},
            }
            for node in graph.nodes
        ],
        "edges": [edge.model_dump(by_alias=True) for edge in graph.edges],
        "obs": {"m_bar": obs.m_bar, "mu_c0": obs.mu_c0, "mu_c1": obs.mu_c1},
    }
    if obs.mu_overrides:
        document["obs"]["mu_overrides"] = {
            str(v): spec.model_dump() for v, spec in sorted(obs.mu_overrides.items())
        }
    return document


def graph_from_document(document: Dict[str, Any]) -> Tuple[InfluenceGraph, ObsParams]:
    """Parse and validate a graph document."""
    body = {key: value for key, value in document.items() if key != "obs"}
    try:
        graph = InfluenceGraph.model_validate(body)
        obs = ObsParams.model_validate(document.get("obs", {}))
    except ValidationError as exc:
        violations = [
            ParamOutOfRange(field=".".join(str(part) for part in error["loc"]), detail=error["msg"])
            for error in exc.errors()
        ]
        raise GraphValidationError(violations) from exc
    return validate_graph(graph), obs


def load_graph(path: Union[str, Path]) -> Tuple[InfluenceGraph, ObsParams]:
    """Load a graph document from disk."""
    path = Path(path)
    with open(path, "r") as f:
        document = json.load(f)
    graph, obs = graph_from_document(document)
    logger.info(f"Loaded graph from {path}: |V|={graph.node_count}, d={graph.d}, m_bar={obs.m_bar}")
    return graph, obs


def save_graph(path: Union[str, Path], graph: InfluenceGraph, obs: ObsParams) -> Path:
    """Write a graph document to disk."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(graph_to_document(graph, obs), f, indent=2)
    return path


def graph_digest(graph: InfluenceGraph, obs: ObsParams) -> str:
    """SHA-256 of the canonical document."""
    canonical = json.dumps(graph_to_document(graph, obs), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
