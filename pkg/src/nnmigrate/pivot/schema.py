"""Per-kind attribute schemas used by validation, ingest and deserialization."""

from __future__ import annotations

from . import types as T


class Attr:
    """Declares one attribute: its value check and whether it is required."""

    def __init__(self, check, required=False, default=None):
        self.check = check  # callable(value) -> error message or None
        self.required = required
        self.default = default


def _int_ge(minimum):
    def check(v):
        if not isinstance(v, int) or isinstance(v, bool) or v < minimum:
            return f"expected integer >= {minimum}, got {v!r}"
        return None
    return check


def _int_tuple(rank, minimum=1):
    def check(v):
        if (not isinstance(v, tuple) or len(v) != rank
                or any(not isinstance(d, int) or isinstance(d, bool) or d < minimum
                       for d in v)):
            return f"expected {rank}-tuple of integers >= {minimum}, got {v!r}"
        return None
    return check


def _fraction(v):
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not 0 <= v < 1:
        return f"expected rate in [0, 1), got {v!r}"
    return None


def _padding(v):
    if v in (T.PADDING_VALID, T.PADDING_SAME):
        return None
    if isinstance(v, int) and not isinstance(v, bool) and v >= 0:
        return None
    return f"expected 'valid', 'same' or integer >= 0, got {v!r}"


def _bool(v):
    if not isinstance(v, bool):
        return f"expected bool, got {v!r}"
    return None


def _conv_schema(rank):
    return {
        "out_channels": Attr(_int_ge(1), required=True),
        "in_channels": Attr(_int_ge(1)),
        "kernel": Attr(_int_tuple(rank), required=True),
        "stride": Attr(_int_tuple(rank), default=(1,) * rank),
        "padding": Attr(_padding, default=T.PADDING_VALID),
    }


def _pool_schema(rank):
    # Stride defaults to the kernel at ingest; schema keeps it required-free.
    return {
        "kernel": Attr(_int_tuple(rank), required=True),
        "stride": Attr(_int_tuple(rank)),
        "padding": Attr(_padding, default=T.PADDING_VALID),
    }


def _rnn_schema():
    return {
        "hidden_size": Attr(_int_ge(1), required=True),
        "input_size": Attr(_int_ge(1)),
        "return_sequences": Attr(_bool, default=False),
        "bidirectional": Attr(_bool, default=False),
    }


LAYER_SCHEMAS = {
    T.LINEAR: {
        "out_features": Attr(_int_ge(1), required=True),
        "in_features": Attr(_int_ge(1)),
    },
    T.FLATTEN: {},
    T.DROPOUT: {"rate": Attr(_fraction, required=True)},
    T.EMBEDDING: {
        "vocab_size": Attr(_int_ge(1), required=True),
        "embedding_dim": Attr(_int_ge(1), required=True),
    },
}
for _kind in T.CONV_KINDS:
    LAYER_SCHEMAS[_kind] = _conv_schema(T.SPATIAL_RANK[_kind])
for _kind in T.POOL_KINDS:
    LAYER_SCHEMAS[_kind] = _pool_schema(T.SPATIAL_RANK[_kind])
for _kind in T.RNN_KINDS:
    LAYER_SCHEMAS[_kind] = _rnn_schema()


def _perm_order(v):
    if (not isinstance(v, tuple) or
            sorted(v) != list(range(len(v))) or len(v) < 1):
        return f"expected a permutation of 0..rank-1, got {v!r}"
    return None


def _int_any(v):
    if not isinstance(v, int) or isinstance(v, bool):
        return f"expected integer, got {v!r}"
    return None


OP_SCHEMAS = {
    T.PERMUTE: {"order": Attr(_perm_order, required=True)},
    T.RESHAPE: {"shape": Attr(lambda v: _int_tuple(len(v))(v) if isinstance(v, tuple) and v else f"expected non-empty int tuple, got {v!r}", required=True)},
    T.TRANSPOSE: {"dim0": Attr(_int_ge(1), required=True),
                  "dim1": Attr(_int_ge(1), required=True)},
    T.CONCATENATE: {"axis": Attr(_int_any, required=True)},
    T.ADD: {},
    T.MULTIPLY: {},
    T.MATMUL: {},
}


def normalize_layer_attrs(kind: str, attrs: dict) -> dict:
    """Fill documented defaults (conv stride 1, pool stride = kernel,
    padding valid) and order keys canonically. Unknown keys are kept so
    validation can flag them."""
    schema = LAYER_SCHEMAS[kind]
    out = {}
    for name, spec in schema.items():
        if name in attrs:
            out[name] = attrs[name]
        elif spec.default is not None:
            out[name] = spec.default
    if kind in T.POOL_KINDS and "stride" not in out and "kernel" in out:
        out["stride"] = out["kernel"]
    for name in attrs:
        if name not in out:
            out[name] = attrs[name]
    return out


def check_attrs(kind: str, attrs: dict, schemas) -> list:
    """Return human-readable problems with an attribute map (may be empty)."""
    schema = schemas[kind]
    problems = []
    for name, spec in schema.items():
        if name not in attrs:
            if spec.required:
                problems.append(f"missing required attribute '{name}'")
            continue
        msg = spec.check(attrs[name])
        if msg:
            problems.append(f"attribute '{name}': {msg}")
    for name in attrs:
        if name not in schema:
            problems.append(f"unknown attribute '{name}'")
    return problems
