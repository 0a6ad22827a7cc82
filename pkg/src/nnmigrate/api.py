"""High-level migration pipeline: parse -> extract -> shapes -> plan -> emit."""

from __future__ import annotations

from dataclasses import dataclass, field

from .codegen import EmitTarget, build_plan, emit, plan_permutes
from .diagnostics import MigrationError
from .frontend import Dialect, extract, parse_source
from .frontend.common import analyze_source
from .frontend.detect import detect_with_notes
from .pivot import types as T
from .shapes import infer_missing_inputs, propagate


class InputShapeRequiredError(MigrationError):
    code, rule = "E405", "InputShapeRequired"


@dataclass
class MigrationResult:
    text: str
    pivot: T.PivotNN          # as extracted from the source
    filled_pivot: T.PivotNN   # with inferred input dimensions
    source_dialect: Dialect
    target: EmitTarget
    notes: list = field(default_factory=list)


def migrate_source(text: str, target: EmitTarget,
                   source_framework: str | None = None,
                   source_style: str | None = None,
                   input_shape: tuple | None = None,
                   emit_training: bool | None = None) -> MigrationResult:
    """Migrate one source file's text to the target dialect.

    ``input_shape`` lists the known dims with the batch implied (the
    channel-last canonical layout); it overrides a shape declared in the
    source. A shape must come from one of the two.
    """
    tree = parse_source(text)
    info = analyze_source(tree)
    dialect, notes = detect_with_notes(info, framework=source_framework,
                                       style=source_style)
    nn = extract(tree, dialect)

    if input_shape is not None:
        shape = T.TensorShape((T.BATCH,) + tuple(input_shape))
        nn = nn.replace(input_shape=shape)
    if nn.input_shape is None:
        raise InputShapeRequiredError(
            "the source declares no input shape; pass one explicitly "
            "(e.g. --input-shape 32,32,3, batch implied)")

    ann = propagate(nn, nn.input_shape)
    filled = infer_missing_inputs(nn, ann)
    plan = plan_permutes(build_plan(filled, ann), ann, target)
    out = emit(plan, filled, target, source_dialect=dialect,
               emit_training=emit_training)
    return MigrationResult(text=out, pivot=nn, filled_pivot=filled,
                           source_dialect=dialect, target=target, notes=notes)
