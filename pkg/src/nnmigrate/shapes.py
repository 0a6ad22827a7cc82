"""Symbolic shape propagation over the pivot network.

Shapes travel in the channel-last canonical layout. The batch dimension is
opaque: any rule that would need a known batch value fails rather than
assuming one, so generated code stays batch-size agnostic.

Transfer rules (spatial dims, per kind):
    valid padding:    out = floor((in - kernel) / stride) + 1
    same padding:     out = ceil(in / stride)
    explicit pad p:   out = floor((in + 2p - kernel) / stride) + 1
Convolution swaps the channel dim for out_channels; pooling preserves it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .diagnostics import (
    ConflictingAttributeError, InvalidPivotError, NegativeDimError,
    ShapeMismatchError, UnresolvedBatchError,
)
from .pivot import types as T
from .pivot.validate import validate


@dataclass
class ModuleShapes:
    inputs: list
    output: T.TensorShape


@dataclass
class ShapeAnnotation:
    """Input/output shapes for every module, keyed by module name."""

    by_module: dict = field(default_factory=dict)
    subnets: dict = field(default_factory=dict)  # SubNN module name -> ShapeAnnotation

    def output_of(self, name: str) -> T.TensorShape:
        return self.by_module[name].output

    def inputs_of(self, name: str) -> list:
        return self.by_module[name].inputs

    def covers(self, nn: T.PivotNN) -> bool:
        return all(m.name in self.by_module for m in nn.modules)


def propagate(nn: T.PivotNN, input_shape: T.TensorShape) -> ShapeAnnotation:
    """Trace the network symbolically, annotating every module."""
    diags = validate(nn)
    if diags:
        raise InvalidPivotError(
            "propagate requires a valid pivot: "
            + "; ".join(d.rule for d in diags), diagnostics=diags)
    if not input_shape.dims or input_shape.dims[0] is not T.BATCH:
        raise ShapeMismatchError(
            f"input shape {input_shape} must have the batch dimension first")
    if any(d is T.BATCH for d in input_shape.dims[1:]):
        raise ShapeMismatchError(
            f"input shape {input_shape} has a non-leading batch dimension")

    ann = ShapeAnnotation()
    env = {T.INPUT: input_shape}
    for m in nn.modules:
        in_shapes = [env[src] for src in m.inputs]
        if m.layer is not None:
            out = _layer_output(m, in_shapes[0])
        elif m.op is not None:
            out = _op_output(m, in_shapes)
        else:
            sub = nn.subnet(m.subnn)
            sub_ann = propagate(sub, in_shapes[0])
            ann.subnets[m.name] = sub_ann
            out = sub_ann.output_of(sub.terminals()[0])
        ann.by_module[m.name] = ModuleShapes(in_shapes, out)
        env[m.name] = out
    return ann


def _known(dim, module, what):
    if dim is T.BATCH:
        raise UnresolvedBatchError(
            f"{what} must be a known dimension, found the batch dimension",
            module=module)
    return dim


def _spatial_out(in_dim, kernel, stride, padding, module):
    if padding == T.PADDING_SAME:
        return math.ceil(in_dim / stride)
    pad = 0 if padding == T.PADDING_VALID else padding
    span = in_dim + 2 * pad - kernel
    if span < 0:
        raise ShapeMismatchError(
            f"kernel {kernel} exceeds padded input extent {in_dim + 2 * pad}",
            module=module)
    out = span // stride + 1
    if out < 1:
        raise NegativeDimError(
            f"output spatial dim {out} < 1 (in={in_dim}, kernel={kernel}, "
            f"stride={stride}, padding={padding})", module=module)
    return out


def _layer_output(m, shape):
    kind = m.layer.kind
    attrs = m.layer.attrs
    name = m.name

    if kind == T.LINEAR:
        if shape.rank < 2:
            raise ShapeMismatchError(
                f"linear layer needs rank >= 2 input, got {shape}", module=name)
        _known(shape.dims[-1], name, "linear input feature dim")
        return shape.replace_last(attrs["out_features"])

    if kind in T.CONV_KINDS or kind in T.POOL_KINDS:
        nd = T.SPATIAL_RANK[kind]
        if shape.rank != nd + 2:
            raise ShapeMismatchError(
                f"{kind} expects rank {nd + 2} input (batch, spatial..., "
                f"channels), got {shape}", module=name)
        spatial = [_known(d, name, "spatial dim") for d in shape.dims[1:-1]]
        channels = _known(shape.dims[-1], name, "channel dim")
        kernel = attrs["kernel"]
        stride = attrs["stride"]
        padding = attrs["padding"]
        out_spatial = [
            _spatial_out(s, k, st, padding, name)
            for s, k, st in zip(spatial, kernel, stride)
        ]
        out_channels = attrs["out_channels"] if kind in T.CONV_KINDS else channels
        return T.TensorShape((shape.dims[0], *out_spatial, out_channels))

    if kind == T.FLATTEN:
        if shape.rank < 2:
            raise ShapeMismatchError(
                f"flatten needs rank >= 2 input, got {shape}", module=name)
        volume = 1
        for d in shape.dims[1:]:
            volume *= _known(d, name, "flattened dim")
        return T.TensorShape((shape.dims[0], volume))

    if kind == T.DROPOUT:
        return shape

    if kind == T.EMBEDDING:
        if shape.rank != 2:
            raise ShapeMismatchError(
                f"embedding expects rank 2 input (batch, time), got {shape}",
                module=name)
        return T.TensorShape(shape.dims + (attrs["embedding_dim"],))

    if kind in T.RNN_KINDS:
        if shape.rank != 3:
            raise ShapeMismatchError(
                f"{kind} expects rank 3 input (batch, time, features), got {shape}",
                module=name)
        width = attrs["hidden_size"] * (2 if attrs.get("bidirectional") else 1)
        if attrs.get("return_sequences"):
            return T.TensorShape((shape.dims[0], shape.dims[1], width))
        return T.TensorShape((shape.dims[0], width))

    raise ShapeMismatchError(f"no transfer rule for layer kind '{kind}'",
                             module=name)


def _resolve_axis(axis, rank, module):
    resolved = axis + rank if axis < 0 else axis
    if not 0 <= resolved < rank:
        raise ShapeMismatchError(f"axis {axis} out of range for rank {rank}",
                                 module=module)
    return resolved


def _op_output(m, in_shapes):
    kind = m.op.kind
    params = m.op.params
    name = m.name

    if kind == T.PERMUTE:
        shape = in_shapes[0]
        order = params["order"]
        if len(order) != shape.rank:
            raise ShapeMismatchError(
                f"permute order {order} does not match rank {shape.rank}",
                module=name)
        if shape.dims[0] is T.BATCH and order[0] != 0:
            raise ShapeMismatchError(
                "permute must keep the batch dimension first", module=name)
        return T.TensorShape(tuple(shape.dims[i] for i in order))

    if kind == T.RESHAPE:
        shape = in_shapes[0]
        target = params["shape"]
        volume = 1
        for d in shape.dims[1:]:
            volume *= _known(d, name, "reshaped dim")
        target_volume = math.prod(target)
        if volume != target_volume:
            raise ShapeMismatchError(
                f"reshape to {target} changes element count "
                f"({volume} != {target_volume})", module=name)
        return T.TensorShape((shape.dims[0], *target))

    if kind == T.TRANSPOSE:
        shape = in_shapes[0]
        d0 = _resolve_axis(params["dim0"], shape.rank, name)
        d1 = _resolve_axis(params["dim1"], shape.rank, name)
        if 0 in (d0, d1) and shape.dims[0] is T.BATCH:
            raise ShapeMismatchError(
                "transpose must keep the batch dimension first", module=name)
        dims = list(shape.dims)
        dims[d0], dims[d1] = dims[d1], dims[d0]
        return T.TensorShape(dims)

    if kind == T.CONCATENATE:
        rank = in_shapes[0].rank
        axis = _resolve_axis(params["axis"], rank, name)
        if axis == 0:
            raise ShapeMismatchError("cannot concatenate along the batch axis",
                                     module=name)
        total = 0
        for s in in_shapes:
            if s.rank != rank:
                raise ShapeMismatchError(
                    f"concatenate inputs disagree on rank: {in_shapes}",
                    module=name)
            for i in range(rank):
                if i == axis:
                    continue
                if s.dims[i] != in_shapes[0].dims[i]:
                    raise ShapeMismatchError(
                        f"concatenate inputs disagree on axis {i}: {in_shapes}",
                        module=name)
            total += _known(s.dims[axis], name, "concatenated dim")
        dims = list(in_shapes[0].dims)
        dims[axis] = total
        return T.TensorShape(dims)

    if kind in (T.ADD, T.MULTIPLY):
        a, b = in_shapes
        if a != b:
            raise ShapeMismatchError(
                f"{kind} requires identical shapes, got {a} and {b}", module=name)
        return a

    if kind == T.MATMUL:
        a, b = in_shapes
        if a.rank < 2 or b.rank < 2:
            raise ShapeMismatchError(
                f"matmul needs rank >= 2 operands, got {a} and {b}", module=name)
        k_a = _known(a.dims[-1], name, "matmul contraction dim")
        k_b = _known(b.dims[-2], name, "matmul contraction dim")
        if k_a != k_b:
            raise ShapeMismatchError(
                f"matmul contraction dims disagree: {a} x {b}", module=name)
        if a.dims[:-2] != b.dims[:-2]:
            raise ShapeMismatchError(
                f"matmul leading dims disagree: {a} x {b}", module=name)
        return T.TensorShape(a.dims[:-1] + (b.dims[-1],))

    raise ShapeMismatchError(f"no transfer rule for tensor op '{kind}'",
                             module=name)


def infer_missing_inputs(nn: T.PivotNN, ann: ShapeAnnotation) -> T.PivotNN:
    """Fill absent in_features / in_channels / input_size from the annotation.

    Already-declared values are checked against the annotation; disagreement
    raises ConflictingAttributeError. The operation is idempotent.
    """
    if not ann.covers(nn):
        raise InvalidPivotError("annotation does not cover every module")

    new_modules = []
    subnet_fills = {}
    for m in nn.modules:
        if m.layer is not None and m.layer.kind in T.INPUT_DIM_ATTR:
            attr = T.INPUT_DIM_ATTR[m.layer.kind]
            in_shape = ann.inputs_of(m.name)[0]
            inferred = in_shape.dims[-1]
            if inferred is T.BATCH:
                raise UnresolvedBatchError(
                    f"cannot infer '{attr}' from {in_shape}: dim is the batch",
                    module=m.name)
            declared = m.layer.get(attr)
            if declared is None:
                m = m.replace(layer=m.layer.with_attrs(**{attr: inferred}))
            elif declared != inferred:
                raise ConflictingAttributeError(
                    f"declared {attr}={declared} disagrees with inferred "
                    f"{inferred}", module=m.name,
                    declared=declared, inferred=inferred)
        elif m.subnn is not None:
            sub = nn.subnet(m.subnn)
            filled = infer_missing_inputs(sub, ann.subnets[m.name])
            prior = subnet_fills.get(m.subnn)
            if prior is not None and prior != filled:
                raise ConflictingAttributeError(
                    f"sub-network '{m.subnn}' is used with conflicting shapes",
                    module=m.name)
            subnet_fills[m.subnn] = filled
        new_modules.append(m)

    subnets = tuple(subnet_fills.get(s.name, s) for s in nn.subnets)
    return nn.replace(modules=tuple(new_modules), subnets=subnets)
