"""Structural validation of pivot networks.

``validate`` is total: it never raises, it returns one diagnostic per
violated rule, naming the offending module. An empty list is the
precondition for serialization, shape propagation and planning.
"""

from __future__ import annotations

import keyword

from ..diagnostics import Diagnostic, ERROR
from . import types as T
from .schema import LAYER_SCHEMAS, OP_SCHEMAS, check_attrs

MAX_SUBNET_DEPTH = 8


def _diag(rule: str, message: str, module: str | None = None) -> Diagnostic:
    return Diagnostic("E301", rule, message, ERROR, module=module)


def _is_identifier(name) -> bool:
    return (isinstance(name, str) and name.isidentifier()
            and not keyword.iskeyword(name))


def validate(nn: T.PivotNN) -> list:
    """Check every pivot invariant; empty result means the network is valid."""
    return _validate(nn, depth=0, seen=())


def _validate(nn, depth, seen):
    diags = []

    if not _is_identifier(nn.name):
        diags.append(_diag("EmptyName", f"network name {nn.name!r} is not an identifier"))

    if depth > MAX_SUBNET_DEPTH:
        diags.append(_diag("SubnetDepth",
                           f"sub-network nesting exceeds {MAX_SUBNET_DEPTH}"))
        return diags

    known = set()
    for m in nn.modules:
        if not _is_identifier(m.name):
            diags.append(_diag("EmptyName",
                               f"module name {m.name!r} is not an identifier",
                               m.name if isinstance(m.name, str) else None))
        if m.name in known:
            diags.append(_diag("DuplicateName",
                               f"module name '{m.name}' is declared twice", m.name))
        diags.extend(_check_inputs(m, known))
        diags.extend(_check_spec(m))
        known.add(m.name)

    if nn.modules:
        uses_input = any(T.INPUT in m.inputs for m in nn.modules)
        if not uses_input:
            diags.append(_diag("NoInput", "no module consumes the network INPUT"))
        terminals = nn.terminals()
        if len(terminals) != 1:
            diags.append(_diag(
                "TerminalCount",
                f"expected exactly one terminal output, found {len(terminals)}"
                f" ({', '.join(terminals) or 'none'})"))
    else:
        diags.append(_diag("NoInput", "network has no modules"))

    for sym, _src in nn.symbols:
        if not _is_identifier(sym):
            diags.append(_diag("EmptyName",
                               f"dynamic symbol {sym!r} is not an identifier"))

    if nn.input_shape is not None:
        diags.extend(_check_shape(nn.input_shape))
    if nn.config is not None:
        diags.extend(_check_config(nn.config))
    for ds in nn.datasets:
        diags.extend(_check_dataset(ds))

    subnet_names = set()
    for sub in nn.subnets:
        if sub.name in subnet_names:
            diags.append(_diag("DuplicateName",
                               f"sub-network '{sub.name}' is declared twice"))
        subnet_names.add(sub.name)
        if sub.name in seen:
            diags.append(_diag("SubnetRef",
                               f"sub-network '{sub.name}' nests recursively"))
            continue
        diags.extend(_validate(sub, depth + 1, seen + (nn.name,)))
    for m in nn.modules:
        if m.subnn is not None and m.subnn not in subnet_names:
            diags.append(_diag("SubnetRef",
                               f"SubNN references unknown network '{m.subnn}'",
                               m.name))
    return diags


def _check_inputs(m, known):
    diags = []
    if not m.inputs:
        diags.append(_diag("InputArity", "module lists no inputs", m.name))
        return diags
    for src in m.inputs:
        if src == T.INPUT:
            continue
        if src not in known:
            diags.append(_diag(
                "CycleOrForwardRef",
                f"input '{src}' is not a module declared earlier", m.name))
    is_join = m.op is not None and m.op.kind in T.JOIN_OPS
    if not is_join and len(m.inputs) != 1:
        diags.append(_diag("InputArity",
                           f"expected exactly one input, got {len(m.inputs)}",
                           m.name))
    if m.op is not None and m.op.kind == T.CONCATENATE and len(m.inputs) < 2:
        diags.append(_diag("ConcatArity", "concatenate requires >= 2 inputs", m.name))
    if is_join and m.op.kind in (T.ADD, T.MULTIPLY, T.MATMUL) and len(m.inputs) != 2:
        diags.append(_diag("InputArity",
                           f"{m.op.kind} requires exactly 2 inputs", m.name))
    return diags


def _check_spec(m):
    diags = []
    set_count = sum(x is not None for x in (m.layer, m.op, m.subnn))
    if set_count != 1:
        diags.append(_diag("AttributeSchema",
                           "module must be exactly one of layer/tensor_op/subnn",
                           m.name))
        return diags
    if m.layer is not None:
        if m.layer.kind not in LAYER_SCHEMAS:
            diags.append(_diag("AttributeSchema",
                               f"unknown layer kind '{m.layer.kind}'", m.name))
            return diags
        for problem in check_attrs(m.layer.kind, m.layer.attrs, LAYER_SCHEMAS):
            diags.append(_diag("AttributeRange", problem, m.name))
        act = m.layer.activation
        if act.kind == "literal" and act.name not in T.SUPPORTED_ACTIVATIONS:
            diags.append(_diag("ActivationName",
                               f"unsupported activation '{act.name}'", m.name))
        if act.kind == "dynamic" and not _is_identifier(act.name):
            diags.append(_diag("ActivationName",
                               f"dynamic activation symbol {act.name!r} is not an identifier",
                               m.name))
        # Only these kinds carry an activation in both dialects; anywhere
        # else it would be silently dropped on one side.
        activation_kinds = (T.LINEAR,) + T.CONV_KINDS + (T.SIMPLERNN,)
        if not act.is_none and m.layer.kind not in activation_kinds:
            diags.append(_diag("ActivationPlacement",
                               f"activation is not supported on {m.layer.kind}",
                               m.name))
    elif m.op is not None:
        if m.op.kind not in OP_SCHEMAS:
            diags.append(_diag("AttributeSchema",
                               f"unknown tensor op '{m.op.kind}'", m.name))
            return diags
        for problem in check_attrs(m.op.kind, m.op.params, OP_SCHEMAS):
            diags.append(_diag("AttributeRange", problem, m.name))
    return diags


def _check_shape(shape):
    diags = []
    batch_positions = [i for i, d in enumerate(shape.dims) if d is T.BATCH]
    if len(batch_positions) > 1:
        diags.append(_diag("BatchPlacement", "more than one batch dimension"))
    elif batch_positions and batch_positions[0] != 0:
        diags.append(_diag("BatchPlacement", "batch dimension is not first"))
    for d in shape.dims:
        if d is T.BATCH:
            continue
        if not isinstance(d, int) or isinstance(d, bool) or d < 1:
            diags.append(_diag("AttributeRange",
                               f"shape dimension {d!r} is not a positive integer"))
    return diags


def _check_config(cfg):
    diags = []
    if cfg.optimizer not in T.OPTIMIZERS:
        diags.append(_diag("ConfigRange", f"unknown optimizer '{cfg.optimizer}'"))
    if not isinstance(cfg.learning_rate, (int, float)) or cfg.learning_rate <= 0:
        diags.append(_diag("ConfigRange", "learning_rate must be > 0"))
    if cfg.loss not in T.LOSSES:
        diags.append(_diag("ConfigRange", f"unknown loss '{cfg.loss}'"))
    if not isinstance(cfg.batch_size, int) or cfg.batch_size < 1:
        diags.append(_diag("ConfigRange", "batch_size must be >= 1"))
    if not isinstance(cfg.epochs, int) or cfg.epochs < 1:
        diags.append(_diag("ConfigRange", "epochs must be >= 1"))
    for metric in cfg.metrics:
        if metric not in T.METRICS:
            diags.append(_diag("ConfigRange", f"unknown metric '{metric}'"))
    return diags


def _check_dataset(ds):
    diags = []
    if not ds.path:
        diags.append(_diag("DatasetPath", f"dataset '{ds.name}' has an empty path"))
    if ds.task not in ("classification", "regression"):
        diags.append(_diag("ConfigRange", f"unknown dataset task '{ds.task}'"))
    if ds.input_format not in ("images", "sequences"):
        diags.append(_diag("ConfigRange",
                           f"unknown dataset input_format '{ds.input_format}'"))
    return diags
