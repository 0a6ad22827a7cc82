"""Source-dialect frontend: parsing, dialect detection, pivot extraction."""

from .detect import Dialect, detect_dialect, detect_with_notes
from .extract import extract
from .parse import SyntaxTree, node_span, parse_source

__all__ = [
    "Dialect", "SyntaxTree", "parse_source", "node_span",
    "detect_dialect", "detect_with_notes", "extract",
]
