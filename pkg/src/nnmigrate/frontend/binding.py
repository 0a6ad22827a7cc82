"""Binding of layer constructor calls to pivot layer specs.

Positional arguments are matched against the per-dialect parameter tables,
keywords are renamed to pivot attributes, and values are normalized (scalar
kernels become tuples, pool strides default to the kernel, paddings are
canonicalized). Constructs outside the supported subset are rejected loudly.
"""

from __future__ import annotations

import ast

from .. import registry as R
from ..diagnostics import UnsupportedLayerError
from ..pivot import types as T
from ..pivot.schema import normalize_layer_attrs
from .parse import node_span
from .symbols import NOT_CONST, ConstBinding, literal_value


class BoundLayer:
    def __init__(self, spec, name=None, input_shape=None):
        self.spec = spec              # LayerSpec
        self.name = name              # explicit name, if the dialect carries one
        self.input_shape = input_shape  # declared input shape tuple, if any


def _err(message, node, layer=None):
    span = node_span(node) or (None, None)
    prefix = f"{layer}: " if layer else ""
    return UnsupportedLayerError(prefix + message, line=span[0], column=span[1])


def const_arg(node: ast.expr, scope, call_node, what="argument"):
    """Literal or single-assignment-constant value of an argument."""
    value = literal_value(node)
    if value is not NOT_CONST:
        return value
    symbol = _symbol_name(node)
    if symbol is not None and scope is not None:
        binding = scope.lookup(symbol)
        if isinstance(binding, ConstBinding):
            return binding.value
    raise _err(f"{what} is not a constant or single-assignment symbol: "
               f"{ast.unparse(node)}", call_node)


def _symbol_name(node: ast.expr) -> str | None:
    if isinstance(node, ast.Name):
        return node.id
    if (isinstance(node, ast.Attribute) and isinstance(node.value, ast.Name)
            and node.value.id == "self"):
        return node.attr
    return None


def resolve_activation_value(node: ast.expr, scope, call_node) -> T.ActivationRef:
    """Literal string -> Literal; non-constant symbol -> Dynamic."""
    value = literal_value(node)
    if value is None:
        return T.ActivationRef.none()
    if isinstance(value, str):
        return _literal_activation(value, call_node)
    symbol = _symbol_name(node)
    if symbol is not None:
        binding = scope.lookup(symbol) if scope is not None else None
        if isinstance(binding, ConstBinding):
            if binding.value is None:
                return T.ActivationRef.none()
            if isinstance(binding.value, str):
                return _literal_activation(binding.value, call_node)
            raise _err(f"activation symbol '{symbol}' is not a string", call_node)
        return T.ActivationRef.dynamic(symbol)
    raise _err(f"unsupported activation expression: {ast.unparse(node)}",
               call_node)


def _literal_activation(name: str, node) -> T.ActivationRef:
    if name not in T.SUPPORTED_ACTIVATIONS:
        raise _err(f"unsupported activation '{name}'", node)
    return T.ActivationRef.literal(name)


def _as_int_tuple(value, nd, node, what):
    if isinstance(value, int) and not isinstance(value, bool):
        return (value,) * nd
    if (isinstance(value, tuple) and len(value) == nd
            and all(isinstance(v, int) and not isinstance(v, bool) for v in value)):
        return value
    raise _err(f"{what} must be an int or {nd}-tuple, got {value!r}", node)


def _as_padding(value, framework, node):
    if value in (T.PADDING_VALID, T.PADDING_SAME):
        return value
    if framework == R.PT:
        if isinstance(value, int) and not isinstance(value, bool) and value >= 0:
            return value
        if (isinstance(value, tuple) and value
                and all(isinstance(v, int) for v in value)
                and len(set(value)) == 1 and value[0] >= 0):
            return value[0]
    raise _err(f"unsupported padding {value!r}", node)


_TUPLE_ATTRS = ("kernel", "stride")


def bind_layer_call(call: ast.Call, kind: str, framework: str, scope) -> BoundLayer:
    """Map one constructor call onto a pivot LayerSpec."""
    rule = R.LAYER_TABLES[framework][kind]
    attrs = {}
    activation = T.ActivationRef.none()
    name = None
    input_shape = None
    extras = {}

    if len(call.args) > len(rule["pos"]):
        raise _err(f"too many positional arguments ({len(call.args)})", call, kind)
    bound = []
    for node, attr in zip(call.args, rule["pos"]):
        bound.append((attr, node))
    for kw in call.keywords:
        if kw.arg is None:
            raise _err("**kwargs expansion is unsupported", call, kind)
        target = rule["kw"].get(kw.arg)
        if target is None:
            raise _err(f"unsupported keyword '{kw.arg}'", call, kind)
        bound.append((target, kw.value))

    for attr, node in bound:
        if attr == "@activation":
            activation = resolve_activation_value(node, scope, call)
        elif attr == "@nonlinearity":
            value = const_arg(node, scope, call, "nonlinearity")
            if value not in ("tanh", "relu"):
                raise _err(f"unsupported nonlinearity {value!r}", call, kind)
            activation = T.ActivationRef.literal(value)
        elif attr == "@name":
            name = const_arg(node, scope, call, "name")
        elif attr == "@input_shape":
            raw = const_arg(node, scope, call, "input_shape")
            if isinstance(raw, int):
                raw = (raw,)
            input_shape = tuple(raw)
        elif attr.startswith("@"):
            _check_constrained(attr, node, scope, call, kind, extras)
        else:
            attrs[attr] = const_arg(node, scope, call, attr)

    nd = rule["nd"]
    if nd is not None:
        for tuple_attr in _TUPLE_ATTRS:
            if tuple_attr in attrs and attrs[tuple_attr] is not None:
                attrs[tuple_attr] = _as_int_tuple(attrs[tuple_attr], nd, call,
                                                  tuple_attr)
        if attrs.get("stride") is None:
            attrs.pop("stride", None)  # dialect default; normalized below
        if "padding" in attrs:
            attrs["padding"] = _as_padding(attrs["padding"], framework, call)

    if kind == T.SIMPLERNN and framework == R.TF and activation.kind == "literal":
        if activation.name not in ("tanh", "relu"):
            raise _err(f"unsupported cell activation '{activation.name}'",
                       call, kind)

    if framework == R.PT and kind in T.RNN_KINDS and not extras.get("batch_first"):
        raise _err("recurrent layers must set batch_first=True", call, kind)

    # Both dialects default the simple recurrent cell to tanh; make it
    # explicit so the pivot is self-contained.
    if kind == T.SIMPLERNN and activation.is_none:
        activation = T.ActivationRef.literal("tanh")

    attrs = normalize_layer_attrs(kind, attrs)
    attrs = _fold_pool_padding(kind, attrs, extras)
    spec = T.LayerSpec(kind, attrs, activation)
    return BoundLayer(spec, name=name, input_shape=input_shape)


def _check_constrained(attr, node, scope, call, kind, extras):
    """Keywords we accept only at their cross-dialect-compatible value."""
    value = const_arg(node, scope, call, attr)
    if attr == "@use_bias_true":
        if value is not True:
            raise _err("layers without a bias are unsupported", call, kind)
    elif attr == "@fixed_one":
        ok = value == 1 or (isinstance(value, tuple) and set(value) == {1})
        if not ok:
            raise _err(f"unsupported non-default value {value!r}", call, kind)
    elif attr == "@fixed_zero":
        if value != 0:
            raise _err(f"unsupported non-default value {value!r}", call, kind)
    elif attr == "@fixed_false":
        if value is not False:
            raise _err(f"unsupported non-default value {value!r}", call, kind)
    elif attr == "@fixed_true":
        if value is not True:
            raise _err(f"unsupported non-default value {value!r}", call, kind)
    elif attr == "@fixed_minus_one":
        if value != -1:
            raise _err(f"unsupported non-default value {value!r}", call, kind)
    elif attr == "@batch_first_true":
        if value is not True:
            raise _err("recurrent layers must set batch_first=True", call, kind)
        extras["batch_first"] = True
    elif attr == "@count_include_pad":
        if not isinstance(value, bool):
            raise _err(f"count_include_pad must be a bool, got {value!r}", call, kind)
        extras["count_include_pad"] = value
    elif attr.startswith("@fixed:"):
        if value != attr.split(":", 1)[1]:
            raise _err(f"unsupported non-default value {value!r}", call, kind)
    else:
        raise _err(f"unhandled constraint {attr}", call, kind)


def _fold_pool_padding(kind, attrs, extras):
    """Recognize the channel-first idiom for same-padded stride-1 pools.

    MaxPool with integer padding kernel//2 (odd kernel, stride 1) computes
    exactly what the channel-last dialect's padding='same' does; AvgPool
    additionally requires count_include_pad=False. Those are folded back to
    'same' so the pivot stays dialect-neutral.
    """
    if kind not in T.POOL_KINDS:
        return attrs
    padding = attrs.get("padding")
    if not isinstance(padding, int) or padding == 0:
        if extras.get("count_include_pad") is False:
            raise UnsupportedLayerError(
                f"{kind}: count_include_pad=False without matching padding")
        return attrs
    kernel = attrs["kernel"]
    stride = attrs["stride"]
    is_same = (all(k % 2 == 1 and padding == k // 2 for k in kernel)
               and all(s == 1 for s in stride))
    if kind in T.AVGPOOL_KINDS:
        is_same = is_same and extras.get("count_include_pad") is False
    elif extras.get("count_include_pad") is False:
        raise UnsupportedLayerError(f"{kind}: count_include_pad does not apply")
    if is_same:
        attrs = dict(attrs)
        attrs["padding"] = T.PADDING_SAME
    elif kind in T.AVGPOOL_KINDS and extras.get("count_include_pad") is False:
        raise UnsupportedLayerError(
            f"{kind}: count_include_pad=False with padding {padding} has no "
            "dialect-neutral equivalent")
    return attrs
