"""Shared source-analysis machinery for the four extractors.

Covers import-alias resolution to canonical dotted paths, location of the
model definition (framework base classes and sequential containers), and
deterministic module-name allocation.
"""

from __future__ import annotations

import ast
import keyword
from dataclasses import dataclass, field

from .. import registry as R
from ..diagnostics import (
    MixedDialectError, UnknownDialectError, UnsupportedConstructError,
)
from .parse import SyntaxTree, node_span
from .symbols import Scope, build_scope

MODEL_BASE_SUFFIXES = {
    R.TF: ("keras.Model", "keras.models.Model"),
    R.PT: ("torch.nn.Module",),
}
SEQUENTIAL_SUFFIXES = {
    R.TF: ("keras.Sequential", "keras.models.Sequential"),
    R.PT: ("torch.nn.Sequential",),
}


def build_alias_map(mod: ast.Module) -> dict:
    """Map local names introduced by imports to canonical dotted paths."""
    aliases = {}
    for stmt in ast.walk(mod):
        if isinstance(stmt, ast.Import):
            for alias in stmt.names:
                local = alias.asname or alias.name.split(".")[0]
                aliases[local] = alias.name if alias.asname else alias.name.split(".")[0]
        elif isinstance(stmt, ast.ImportFrom) and stmt.module and stmt.level == 0:
            for alias in stmt.names:
                if alias.name == "*":
                    continue
                local = alias.asname or alias.name
                aliases[local] = f"{stmt.module}.{alias.name}"
    return aliases


def resolve_dotted(node: ast.expr, aliases: dict) -> str | None:
    """Canonical dotted path of a Name/Attribute chain, or None."""
    parts = []
    while isinstance(node, ast.Attribute):
        parts.append(node.attr)
        node = node.value
    if not isinstance(node, ast.Name):
        return None
    root = aliases.get(node.id)
    if root is None:
        return None
    parts.append(root)
    return ".".join(reversed(parts))


def framework_of_path(path: str | None) -> str | None:
    if path is None:
        return None
    root = path.split(".")[0]
    if root in R.TF_ROOTS:
        return R.TF
    if root in R.PT_ROOTS:
        return R.PT
    return None


def import_roots(mod: ast.Module) -> set:
    roots = set()
    for stmt in ast.walk(mod):
        if isinstance(stmt, ast.Import):
            for alias in stmt.names:
                roots.add(alias.name.split(".")[0])
        elif isinstance(stmt, ast.ImportFrom) and stmt.module and stmt.level == 0:
            roots.add(stmt.module.split(".")[0])
    return roots


def matches_suffix(path: str | None, suffixes) -> bool:
    if path is None:
        return False
    return any(path == s or path.endswith("." + s) for s in suffixes)


@dataclass
class ModelClassInfo:
    node: ast.ClassDef
    framework: str
    init: ast.FunctionDef | None
    forward: ast.FunctionDef | None


@dataclass
class SequentialInfo:
    call: ast.Call
    framework: str
    var_name: str         # assignment target (attribute name for self.x)
    add_calls: list = field(default_factory=list)  # model.add(...) statements
    enclosing_init: ast.FunctionDef | None = None  # wrapper-class constructor


@dataclass
class SourceInfo:
    """Everything detection and extraction need to know about a file."""

    tree: SyntaxTree
    aliases: dict
    module_scope: Scope
    classes: list          # ModelClassInfo, in file order
    sequentials: list      # SequentialInfo, in file order
    instantiated_inside: set  # class names constructed inside other classes
    terminal_assign: tuple | None  # (kind, payload) of last top-level model obj
    notes: list = field(default_factory=list)


def _find_method(cls: ast.ClassDef, names) -> ast.FunctionDef | None:
    for stmt in cls.body:
        if isinstance(stmt, ast.FunctionDef) and stmt.name in names:
            return stmt
    return None


def analyze_source(tree: SyntaxTree) -> SourceInfo:
    mod = tree.root
    aliases = build_alias_map(mod)
    module_scope = build_scope(mod.body)

    classes = []
    class_names = set()
    for stmt in mod.body:
        if not isinstance(stmt, ast.ClassDef):
            continue
        class_names.add(stmt.name)
        for base in stmt.bases:
            path = resolve_dotted(base, aliases)
            for fw, suffixes in MODEL_BASE_SUFFIXES.items():
                if matches_suffix(path, suffixes):
                    classes.append(ModelClassInfo(
                        node=stmt, framework=fw,
                        init=_find_method(stmt, ("__init__",)),
                        forward=_find_method(stmt, ("forward", "call"))))
                    break

    def _scan_sequentials(statements, enclosing_init=None):
        found = []
        for node in statements:
            if not isinstance(node, ast.Assign) or len(node.targets) != 1:
                continue
            value, target = node.value, node.targets[0]
            if not isinstance(value, ast.Call):
                continue
            path = resolve_dotted(value.func, aliases)
            for fw, suffixes in SEQUENTIAL_SUFFIXES.items():
                if matches_suffix(path, suffixes):
                    if isinstance(target, ast.Name):
                        var = target.id
                    elif isinstance(target, ast.Attribute):
                        var = target.attr
                    else:
                        continue
                    found.append(SequentialInfo(
                        call=value, framework=fw, var_name=var,
                        enclosing_init=enclosing_init))
        return found

    sequentials = _scan_sequentials(mod.body)
    model_class_nodes = {c.node for c in classes}
    for stmt in mod.body:
        if isinstance(stmt, ast.ClassDef) and stmt not in model_class_nodes:
            init = _find_method(stmt, ("__init__",))
            if init is not None:
                sequentials.extend(_scan_sequentials(init.body, init))

    # model.add(layer) accumulation onto an empty Sequential
    seq_vars = {s.var_name: s for s in sequentials}
    for stmt in mod.body:
        if (isinstance(stmt, ast.Expr) and isinstance(stmt.value, ast.Call)
                and isinstance(stmt.value.func, ast.Attribute)
                and stmt.value.func.attr == "add"
                and isinstance(stmt.value.func.value, ast.Name)
                and stmt.value.func.value.id in seq_vars):
            seq_vars[stmt.value.func.value.id].add_calls.append(stmt.value)

    # Classes instantiated inside another class body are nested sub-models,
    # not the root model.
    instantiated_inside = set()
    for stmt in mod.body:
        if isinstance(stmt, ast.ClassDef):
            for node in ast.walk(stmt):
                if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                        and node.func.id in class_names):
                    instantiated_inside.add(node.func.id)

    # Last top-level assignment constructing a model object.
    terminal = None
    model_class_names = {c.node.name for c in classes}
    for stmt in mod.body:
        if not isinstance(stmt, ast.Assign) or len(stmt.targets) != 1:
            continue
        target, value = stmt.targets[0], stmt.value
        if not isinstance(target, ast.Name) or not isinstance(value, ast.Call):
            continue
        if isinstance(value.func, ast.Name) and value.func.id in model_class_names:
            terminal = ("class", value.func.id)
        else:
            path = resolve_dotted(value.func, aliases)
            for suffixes in SEQUENTIAL_SUFFIXES.values():
                if matches_suffix(path, suffixes):
                    terminal = ("sequential", target.id)

    return SourceInfo(tree=tree, aliases=aliases, module_scope=module_scope,
                      classes=classes, sequentials=sequentials,
                      instantiated_inside=instantiated_inside,
                      terminal_assign=terminal)


def detect_framework(info: SourceInfo) -> str:
    roots = import_roots(info.tree.root)
    has_tf = any(r in R.TF_ROOTS for r in roots)
    has_pt = any(r in R.PT_ROOTS for r in roots)
    if has_tf and has_pt:
        raise MixedDialectError(
            "both frameworks' namespaces are imported; pass an explicit "
            "source dialect")
    if has_tf:
        return R.TF
    if has_pt:
        return R.PT
    raise UnknownDialectError(
        "neither framework's namespace is imported")


def root_model_class(info: SourceInfo, framework: str) -> ModelClassInfo | None:
    """The framework-derived class that is not nested inside another model."""
    candidates = [c for c in info.classes
                  if c.framework == framework
                  and c.node.name not in info.instantiated_inside]
    if not candidates:
        return None
    if info.terminal_assign and info.terminal_assign[0] == "class":
        for c in candidates:
            if c.node.name == info.terminal_assign[1]:
                return c
    return candidates[-1]


class NameAllocator:
    """Deterministic unique module names: explicit names are sanitized and
    deduplicated with numeric suffixes; synthesized names follow the
    kind, kind_1, kind_2 convention."""

    def __init__(self):
        self.used = set()
        self.counters = {}

    def claim(self, name: str) -> str:
        name = sanitize_identifier(name)
        candidate = name
        serial = 0
        while candidate in self.used:
            serial += 1
            candidate = f"{name}_{serial}"
        self.used.add(candidate)
        return candidate

    def synthesize(self, base: str) -> str:
        count = self.counters.get(base, 0)
        self.counters[base] = count + 1
        candidate = base if count == 0 else f"{base}_{count}"
        return self.claim(candidate)


def sanitize_identifier(name: str) -> str:
    cleaned = "".join(c if c.isalnum() or c == "_" else "_" for c in name)
    if not cleaned or cleaned[0].isdigit():
        cleaned = "_" + cleaned
    if keyword.iskeyword(cleaned):
        cleaned += "_"
    return cleaned


def unsupported(message: str, node: ast.AST | None = None):
    span = node_span(node) if node is not None else None
    line, col = (span if span else (None, None))
    return UnsupportedConstructError(message, line=line, column=col)
