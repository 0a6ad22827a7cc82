"""Versioned JSON serialization of pivot networks (*.nn.json).

The document is byte-deterministic for equal inputs: key order is fixed by
construction, indentation is fixed, and the encoder is pure. ``input_shape``
stores only the known dims; the leading batch dimension is implied.
"""

from __future__ import annotations

import json

from ..diagnostics import InvalidPivotError, PivotFormatError
from . import types as T
from .validate import validate

SCHEMA_VERSION = 1


# --- encoding ---------------------------------------------------------------

def to_json_dict(nn: T.PivotNN) -> dict:
    doc = {"schema_version": SCHEMA_VERSION}
    doc.update(_network_dict(nn))
    return doc


def _network_dict(nn):
    doc = {"name": nn.name}
    if nn.input_shape is not None:
        doc["input_shape"] = [d for d in nn.input_shape.dims if d is not T.BATCH]
    doc["modules"] = [_module_dict(m) for m in nn.modules]
    if nn.config is not None:
        cfg = nn.config
        doc["config"] = {
            "optimizer": cfg.optimizer,
            "learning_rate": cfg.learning_rate,
            "loss": cfg.loss,
            "batch_size": cfg.batch_size,
            "epochs": cfg.epochs,
            "metrics": list(cfg.metrics),
        }
    if nn.datasets:
        doc["datasets"] = [
            {"name": d.name, "path": d.path, "task": d.task,
             "input_format": d.input_format}
            for d in nn.datasets
        ]
    if nn.subnets:
        doc["subnets"] = [_network_dict(s) for s in nn.subnets]
    if nn.symbols:
        doc["symbols"] = {name: source for name, source in nn.symbols}
    return doc


def _module_dict(m):
    doc = {"name": m.name}
    if m.layer is not None:
        doc["kind"] = m.layer.kind
        attributes = {k: _encode_value(v) for k, v in m.layer.attrs.items()}
        act = m.layer.activation
        if act.kind == "literal":
            attributes["activation"] = act.name
        elif act.kind == "dynamic":
            attributes["activation"] = {"dynamic": act.name}
        doc["attributes"] = attributes
    elif m.op is not None:
        doc["kind"] = m.op.kind
        doc["attributes"] = {k: _encode_value(v) for k, v in m.op.params.items()}
    else:
        doc["kind"] = "subnn"
        doc["attributes"] = {"ref": m.subnn}
    doc["inputs"] = list(m.inputs)
    return doc


def _encode_value(v):
    if isinstance(v, tuple):
        return [_encode_value(x) for x in v]
    return v


def serialize(nn: T.PivotNN) -> bytes:
    """Encode a *valid* pivot; raises InvalidPivotError otherwise."""
    diags = validate(nn)
    if diags:
        raise InvalidPivotError(
            "cannot serialize an invalid pivot: "
            + "; ".join(d.rule + ": " + d.message for d in diags),
            diagnostics=diags)
    text = json.dumps(to_json_dict(nn), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


# --- decoding ---------------------------------------------------------------

def deserialize(data: bytes | str) -> T.PivotNN:
    """Decode and fully re-validate a pivot document.

    Malformed documents and invariant violations raise PivotFormatError with
    a JSON-path position.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise PivotFormatError(f"not valid JSON: {exc.msg} (line {exc.lineno})") from exc
    if not isinstance(doc, dict):
        raise PivotFormatError("top-level value must be an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise PivotFormatError(
            f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})",
            path="$.schema_version")
    nn = from_json_dict(doc)
    diags = validate(nn)
    if diags:
        raise PivotFormatError(
            "document violates pivot invariants: "
            + "; ".join(f"{d.rule} at {d.module or 'network'}: {d.message}"
                        for d in diags))
    return nn


def from_json_dict(doc: dict) -> T.PivotNN:
    return _decode_network(doc, "$")


def _require(doc, key, kind, path):
    if key not in doc:
        raise PivotFormatError(f"missing required key '{key}'", path=path)
    value = doc[key]
    if not isinstance(value, kind):
        raise PivotFormatError(
            f"key '{key}' must be {kind.__name__}, got {type(value).__name__}",
            path=f"{path}.{key}")
    return value


def _decode_network(doc, path):
    name = _require(doc, "name", str, path)
    raw_modules = _require(doc, "modules", list, path)
    modules = [_decode_module(m, f"{path}.modules[{i}]")
               for i, m in enumerate(raw_modules)]

    input_shape = None
    if "input_shape" in doc:
        dims = doc["input_shape"]
        if not isinstance(dims, list):
            raise PivotFormatError("input_shape must be a list",
                                   path=f"{path}.input_shape")
        input_shape = T.TensorShape((T.BATCH,) + tuple(dims))

    config = None
    if "config" in doc:
        cfg = _require(doc, "config", dict, path)
        cpath = f"{path}.config"
        config = T.TrainingConfig(
            optimizer=_require(cfg, "optimizer", str, cpath),
            learning_rate=_require(cfg, "learning_rate", (int, float), cpath),
            loss=_require(cfg, "loss", str, cpath),
            batch_size=_require(cfg, "batch_size", int, cpath),
            epochs=_require(cfg, "epochs", int, cpath),
            metrics=tuple(cfg.get("metrics", [])),
        )

    datasets = []
    for i, d in enumerate(doc.get("datasets", [])):
        dpath = f"{path}.datasets[{i}]"
        if not isinstance(d, dict):
            raise PivotFormatError("dataset entry must be an object", path=dpath)
        datasets.append(T.DatasetRef(
            name=_require(d, "name", str, dpath),
            path=_require(d, "path", str, dpath),
            task=_require(d, "task", str, dpath),
            input_format=_require(d, "input_format", str, dpath),
        ))

    subnets = [_decode_network(s, f"{path}.subnets[{i}]")
               for i, s in enumerate(doc.get("subnets", []))]

    raw_symbols = doc.get("symbols", {})
    if not isinstance(raw_symbols, dict) or not all(
            isinstance(k, str) and isinstance(v, str)
            for k, v in raw_symbols.items()):
        raise PivotFormatError("symbols must map names to source strings",
                               path=f"{path}.symbols")
    symbols = tuple(sorted(raw_symbols.items()))

    return T.PivotNN(name, modules, input_shape=input_shape, config=config,
                     datasets=tuple(datasets), subnets=tuple(subnets),
                     symbols=symbols)


def _decode_module(doc, path):
    if not isinstance(doc, dict):
        raise PivotFormatError("module entry must be an object", path=path)
    name = _require(doc, "name", str, path)
    kind = _require(doc, "kind", str, path)
    inputs = _require(doc, "inputs", list, path)
    attributes = dict(doc.get("attributes", {}))

    if kind in T.LAYER_KINDS:
        activation = _decode_activation(attributes.pop("activation", None), path)
        attrs = {k: _decode_value(v) for k, v in attributes.items()}
        return T.ModuleSpec(name, inputs,
                            layer=T.LayerSpec(kind, attrs, activation))
    if kind in T.OP_KINDS:
        if "activation" in attributes:
            raise PivotFormatError(
                "tensor op modules never carry an activation", path=path)
        params = {k: _decode_value(v) for k, v in attributes.items()}
        return T.ModuleSpec(name, inputs, op=T.TensorOpSpec(kind, params))
    if kind == "subnn":
        if "activation" in attributes:
            raise PivotFormatError(
                "sub-network modules never carry an activation", path=path)
        ref = attributes.get("ref")
        if not isinstance(ref, str):
            raise PivotFormatError("subnn module needs a string 'ref' attribute",
                                   path=path)
        return T.ModuleSpec(name, inputs, subnn=ref)
    raise PivotFormatError(f"unknown module kind '{kind}'", path=f"{path}.kind")


def _decode_activation(raw, path):
    if raw is None:
        return T.ActivationRef.none()
    if isinstance(raw, str):
        return T.ActivationRef.literal(raw)
    if isinstance(raw, dict) and isinstance(raw.get("dynamic"), str):
        return T.ActivationRef.dynamic(raw["dynamic"])
    raise PivotFormatError(f"malformed activation {raw!r}",
                           path=f"{path}.attributes.activation")


def _decode_value(v):
    if isinstance(v, list):
        return tuple(_decode_value(x) for x in v)
    return v
