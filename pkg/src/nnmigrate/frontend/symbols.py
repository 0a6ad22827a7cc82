"""Constant and single-assignment symbol tracking.

A symbol maps to its last-assigned constant value within a scope. Symbols
assigned once with a non-constant initializer keep the initializer's source
text (so migration can reproduce it); reassigned or computed symbols map to
bottom and resolve to nothing.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass


@dataclass(frozen=True)
class ConstBinding:
    value: object


@dataclass(frozen=True)
class ExprBinding:
    source: str  # unparsed initializer text


BOTTOM = object()  # reassigned or non-constant beyond recovery


class Scope:
    """One lexical scope's symbol table with an optional parent."""

    def __init__(self, parent: "Scope | None" = None):
        self.parent = parent
        self.bindings: dict = {}

    def assign(self, name: str, value_node: ast.expr):
        if name in self.bindings:
            self.bindings[name] = BOTTOM
            return
        const = literal_value(value_node)
        if const is not _NOT_CONST:
            self.bindings[name] = ConstBinding(const)
        else:
            self.bindings[name] = ExprBinding(ast.unparse(value_node))

    def mark_bottom(self, name: str):
        self.bindings[name] = BOTTOM

    def lookup(self, name: str):
        scope = self
        while scope is not None:
            if name in scope.bindings:
                return scope.bindings[name]
            scope = scope.parent
        return None


_NOT_CONST = object()


def literal_value(node: ast.expr):
    """Evaluate a literal expression (constants, +-numbers, tuples/lists of
    literals, dicts of literals); returns _NOT_CONST sentinel otherwise."""
    if isinstance(node, ast.Constant):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = literal_value(node.operand)
        if isinstance(inner, (int, float)) and not isinstance(inner, bool):
            return -inner if isinstance(node.op, ast.USub) else inner
        return _NOT_CONST
    if isinstance(node, (ast.Tuple, ast.List)):
        items = [literal_value(e) for e in node.elts]
        if any(item is _NOT_CONST for item in items):
            return _NOT_CONST
        return tuple(items)
    if isinstance(node, ast.Dict):
        keys = [literal_value(k) if k is not None else _NOT_CONST for k in node.keys]
        values = [literal_value(v) for v in node.values]
        if any(x is _NOT_CONST for x in keys + values):
            return _NOT_CONST
        return dict(zip(keys, values))
    return _NOT_CONST


def is_literal(node: ast.expr) -> bool:
    return literal_value(node) is not _NOT_CONST


NOT_CONST = _NOT_CONST


def build_scope(statements, parent=None, self_scope=None) -> Scope:
    """Collect simple assignments from a statement list.

    ``self_scope`` receives ``self.<name> = value`` attribute assignments
    when given (used for constructor bodies).
    """
    scope = Scope(parent)
    for stmt in statements:
        if isinstance(stmt, ast.Assign) and len(stmt.targets) == 1:
            target = stmt.targets[0]
            if isinstance(target, ast.Name):
                scope.assign(target.id, stmt.value)
            elif (self_scope is not None and isinstance(target, ast.Attribute)
                  and isinstance(target.value, ast.Name)
                  and target.value.id == "self"):
                self_scope.assign(target.attr, stmt.value)
        elif isinstance(stmt, ast.AugAssign) and isinstance(stmt.target, ast.Name):
            scope.mark_bottom(stmt.target.id)
        elif isinstance(stmt, ast.AnnAssign) and isinstance(stmt.target, ast.Name):
            if stmt.value is not None:
                scope.assign(stmt.target.id, stmt.value)
    return scope
