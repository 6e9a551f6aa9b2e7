"""Influence graph model: alphabet, validation, generators and persistence."""

from .alphabet import Alphabet, alphabet_size_bound, support_alphabet
from .validation import collect_violations, interior_range, require_interior, validate_graph
from .generators import TOPOLOGIES, generate
from .io import graph_digest, graph_from_document, graph_to_document, load_graph, save_graph

__all__ = [
    "Alphabet",
    "alphabet_size_bound",
    "support_alphabet",
    "collect_violations",
    "interior_range",
    "require_interior",
    "validate_graph",
    "TOPOLOGIES",
    "generate",
    "graph_digest",
    "graph_from_document",
    "graph_to_document",
    "load_graph",
    "save_graph",
]
