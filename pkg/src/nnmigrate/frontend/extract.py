"""Extraction entry point: source tree + dialect -> pivot network."""

from __future__ import annotations

from .. import registry as R
from ..diagnostics import InvalidPivotError, UnsupportedConstructError
from ..pivot import types as T
from ..pivot.validate import validate
from .common import SourceInfo, analyze_source, root_model_class
from .detect import Dialect
from .extractors import SequentialExtractor, SubclassingExtractor
from .metadata import (
    declared_input_shape, declared_model_name, extract_config, extract_datasets,
)
from .parse import SyntaxTree


def extract(tree: SyntaxTree, dialect: Dialect) -> T.PivotNN:
    """Lift source code in the given dialect into a validated pivot network."""
    info = analyze_source(tree)
    if dialect.style == R.SUBCLASSING:
        nn = _extract_subclassing(info, dialect.framework)
    else:
        nn = _extract_sequential(info, dialect.framework)

    diags = validate(nn)
    if diags:
        raise InvalidPivotError(
            "extracted network violates pivot invariants: "
            + "; ".join(f"{d.rule} at {d.module or 'network'}: {d.message}"
                        for d in diags),
            diagnostics=diags)
    return nn


def _extract_subclassing(info: SourceInfo, framework: str) -> T.PivotNN:
    cls = root_model_class(info, framework)
    if cls is None:
        raise UnsupportedConstructError(
            "no framework-derived model class found for subclassing extraction")
    extractor = SubclassingExtractor(info, framework, cls)
    modules, _terminal = extractor.extract()
    return _assemble(info, framework, extractor, modules,
                     name=cls.node.name)


def _extract_sequential(info: SourceInfo, framework: str) -> T.PivotNN:
    candidates = [s for s in info.sequentials if s.framework == framework]
    if not candidates:
        raise UnsupportedConstructError(
            "no sequential container found for sequential extraction")
    chosen = candidates[0]
    if len(candidates) > 1:
        terminal = info.terminal_assign
        if terminal and terminal[0] == "sequential":
            for c in candidates:
                if c.var_name == terminal[1]:
                    chosen = c
                    break
            else:
                raise UnsupportedConstructError(
                    "multiple sequential containers found")
        else:
            raise UnsupportedConstructError(
                "multiple sequential containers found")

    extractor = SequentialExtractor(info, framework, chosen)
    modules, _terminal = extractor.extract()

    name = (extractor.explicit_name or declared_model_name(info)
            or _default_name(chosen.var_name))
    input_shape = extractor.input_shape
    return _assemble(info, framework, extractor, modules, name=name,
                     declared_shape=input_shape)


def _default_name(var_name: str) -> str:
    return var_name[:1].upper() + var_name[1:]


def _assemble(info, framework, extractor, modules, name, declared_shape=None):
    shape_dims = declared_shape or declared_input_shape(info)
    input_shape = (T.TensorShape((T.BATCH,) + tuple(shape_dims))
                   if shape_dims else None)
    subnets = tuple(extractor.subnn_networks[key]
                    for key in sorted(extractor.subnn_networks))
    return T.PivotNN(
        name=name,
        modules=modules,
        input_shape=input_shape,
        config=extract_config(info, framework),
        datasets=extract_datasets(info, framework),
        subnets=subnets,
        symbols=extractor.dynamic_symbol_sources(modules),
    )
