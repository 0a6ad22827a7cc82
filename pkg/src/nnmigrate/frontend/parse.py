"""Source parsing into a syntax tree with span-carrying nodes.

The host scripting language grammar is pinned to version 3.10; later syntax
is rejected the same way genuinely malformed input is.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass

from ..diagnostics import SourceSyntaxError

GRAMMAR_VERSION = (3, 10)


@dataclass
class SyntaxTree:
    """Parsed module plus the original text (kept for expression excerpts)."""

    root: ast.Module
    text: str


def parse_source(text: str) -> SyntaxTree:
    """Parse source text; trailing garbage or malformed syntax is an error."""
    try:
        root = ast.parse(text, feature_version=GRAMMAR_VERSION)
    except SyntaxError as exc:
        raise SourceSyntaxError(
            exc.msg or "invalid syntax",
            line=exc.lineno, column=exc.offset, expected=exc.msg) from exc
    return SyntaxTree(root=root, text=text)


def node_span(node: ast.AST) -> tuple | None:
    """(line, column) of a node, if the grammar assigns it one."""
    line = getattr(node, "lineno", None)
    if line is None:
        return None
    return (line, getattr(node, "col_offset", 0))
