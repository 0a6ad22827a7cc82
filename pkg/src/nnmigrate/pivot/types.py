"""Framework-independent pivot model of a neural network.

Every other stage (extraction, shape propagation, planning, emission) speaks
this vocabulary. Values are immutable after construction and compare
structurally; source spans are carried for diagnostics but excluded from
equality so pivots extracted from different files can be compared.

Shapes follow the channel-last canonical layout throughout: ``[batch,
spatial..., channels]`` for image data and ``[batch, time, features]`` for
sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

INPUT = "INPUT"  # reserved producer token for the network input


class _Batch:
    """Singleton marker for the symbolic (unknown) batch dimension."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "B"

    def __deepcopy__(self, memo):
        return self


BATCH = _Batch()

# A dimension is either the symbolic batch or a known positive int.
Dim = object


@dataclass(frozen=True)
class TensorShape:
    """Tensor shape whose dims are known positive ints or the batch marker."""

    dims: tuple

    def __init__(self, dims):
        object.__setattr__(self, "dims", tuple(dims))

    @property
    def rank(self) -> int:
        return len(self.dims)

    @property
    def has_batch(self) -> bool:
        return any(d is BATCH for d in self.dims)

    def non_batch(self) -> tuple:
        return tuple(d for d in self.dims if d is not BATCH)

    def replace_last(self, dim) -> "TensorShape":
        return TensorShape(self.dims[:-1] + (dim,))

    def __repr__(self):
        return "(" + ", ".join(str(d) for d in self.dims) + ")"


def batched(*dims) -> TensorShape:
    """Shape with the symbolic batch prepended to the given known dims."""
    return TensorShape((BATCH,) + tuple(dims))


# --- layer vocabulary -------------------------------------------------------

LINEAR = "linear"
CONV1D = "conv1d"
CONV2D = "conv2d"
CONV3D = "conv3d"
MAXPOOL1D = "maxpool1d"
MAXPOOL2D = "maxpool2d"
MAXPOOL3D = "maxpool3d"
AVGPOOL1D = "avgpool1d"
AVGPOOL2D = "avgpool2d"
AVGPOOL3D = "avgpool3d"
FLATTEN = "flatten"
DROPOUT = "dropout"
EMBEDDING = "embedding"
SIMPLERNN = "simplernn"
LSTM = "lstm"
GRU = "gru"

CONV_KINDS = (CONV1D, CONV2D, CONV3D)
MAXPOOL_KINDS = (MAXPOOL1D, MAXPOOL2D, MAXPOOL3D)
AVGPOOL_KINDS = (AVGPOOL1D, AVGPOOL2D, AVGPOOL3D)
POOL_KINDS = MAXPOOL_KINDS + AVGPOOL_KINDS
RNN_KINDS = (SIMPLERNN, LSTM, GRU)
# Layers whose data layout differs between the two channel conventions.
CHANNEL_SENSITIVE_KINDS = CONV_KINDS + POOL_KINDS

LAYER_KINDS = (
    (LINEAR,) + CONV_KINDS + POOL_KINDS
    + (FLATTEN, DROPOUT, EMBEDDING) + RNN_KINDS
)

# Spatial rank of conv/pool kinds (1, 2 or 3).
SPATIAL_RANK = {k: int(k[-2]) for k in CHANNEL_SENSITIVE_KINDS}

# Optional input-dimension attribute a channel-first target needs per kind.
INPUT_DIM_ATTR = {LINEAR: "in_features"}
INPUT_DIM_ATTR.update({k: "in_channels" for k in CONV_KINDS})
INPUT_DIM_ATTR.update({k: "input_size" for k in RNN_KINDS})

PADDING_VALID = "valid"
PADDING_SAME = "same"

# --- tensor op vocabulary ---------------------------------------------------

PERMUTE = "permute"
RESHAPE = "reshape"
TRANSPOSE = "transpose"
CONCATENATE = "concatenate"
ADD = "add"
MULTIPLY = "multiply"
MATMUL = "matmul"

OP_KINDS = (PERMUTE, RESHAPE, TRANSPOSE, CONCATENATE, ADD, MULTIPLY, MATMUL)
# Ops that may (and must) take more than one input.
JOIN_OPS = (CONCATENATE, ADD, MULTIPLY, MATMUL)

SUPPORTED_ACTIVATIONS = ("relu", "sigmoid", "tanh", "softmax", "leaky_relu")


@dataclass(frozen=True)
class ActivationRef:
    """Activation attached to a layer: absent, a literal name, or a dynamic
    reference to a source symbol resolved only at runtime."""

    kind: str  # "none" | "literal" | "dynamic"
    name: str | None = None

    @staticmethod
    def none() -> "ActivationRef":
        return ActivationRef("none")

    @staticmethod
    def literal(name: str) -> "ActivationRef":
        return ActivationRef("literal", name)

    @staticmethod
    def dynamic(symbol: str) -> "ActivationRef":
        return ActivationRef("dynamic", symbol)

    @property
    def is_none(self) -> bool:
        return self.kind == "none"


@dataclass(frozen=True)
class LayerSpec:
    """One network layer: a kind plus its normalized attribute map.

    Attributes use pivot names (out_features, out_channels, kernel, stride,
    padding, rate, vocab_size, embedding_dim, hidden_size, return_sequences,
    bidirectional, and the optional in_features / in_channels / input_size).
    Kernel and stride are stored as int tuples of the layer's spatial rank.
    """

    kind: str
    attrs: dict = field(default_factory=dict)
    activation: ActivationRef = field(default_factory=ActivationRef.none)

    def __post_init__(self):
        object.__setattr__(self, "attrs", dict(self.attrs))

    def get(self, name, default=None):
        return self.attrs.get(name, default)

    def with_attrs(self, **updates) -> "LayerSpec":
        merged = dict(self.attrs)
        merged.update(updates)
        return LayerSpec(self.kind, merged, self.activation)

    def __eq__(self, other):
        if not isinstance(other, LayerSpec):
            return NotImplemented
        return (self.kind, self.attrs, self.activation) == \
            (other.kind, other.attrs, other.activation)


@dataclass(frozen=True)
class TensorOpSpec:
    """Low-level tensor operation appearing as a first-class module."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "params", dict(self.params))

    def __eq__(self, other):
        if not isinstance(other, TensorOpSpec):
            return NotImplemented
        return (self.kind, self.params) == (other.kind, other.params)


@dataclass(frozen=True)
class ModuleSpec:
    """One building block of the network with its named producers.

    Exactly one of ``layer``, ``op`` or ``subnn`` is set. ``inputs`` names
    earlier modules (or the INPUT token). ``span`` records the originating
    source location for diagnostics and is excluded from equality.
    """

    name: str
    inputs: tuple
    layer: LayerSpec | None = None
    op: TensorOpSpec | None = None
    subnn: str | None = None
    span: tuple | None = field(default=None, compare=False)

    def __init__(self, name, inputs, layer=None, op=None, subnn=None, span=None):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "inputs", tuple(inputs))
        object.__setattr__(self, "layer", layer)
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "subnn", subnn)
        object.__setattr__(self, "span", span)

    @property
    def kind(self) -> str:
        if self.layer is not None:
            return "layer"
        if self.op is not None:
            return "tensor_op"
        return "subnn"

    @property
    def is_layer(self) -> bool:
        return self.layer is not None

    def replace(self, **changes) -> "ModuleSpec":
        fields = {"name": self.name, "inputs": self.inputs, "layer": self.layer,
                  "op": self.op, "subnn": self.subnn, "span": self.span}
        fields.update(changes)
        return ModuleSpec(**fields)


OPTIMIZERS = ("sgd", "adam", "adamw", "rmsprop")
LOSSES = ("crossentropy", "binary_crossentropy", "mse")
METRICS = ("accuracy", "f1-score")


@dataclass(frozen=True)
class TrainingConfig:
    optimizer: str
    learning_rate: float
    loss: str
    batch_size: int
    epochs: int
    metrics: tuple = ()

    def __init__(self, optimizer, learning_rate, loss, batch_size, epochs,
                 metrics=()):
        object.__setattr__(self, "optimizer", optimizer)
        object.__setattr__(self, "learning_rate", learning_rate)
        object.__setattr__(self, "loss", loss)
        object.__setattr__(self, "batch_size", batch_size)
        object.__setattr__(self, "epochs", epochs)
        object.__setattr__(self, "metrics", tuple(metrics))


@dataclass(frozen=True)
class DatasetRef:
    name: str
    path: str
    task: str  # "classification" | "regression"
    input_format: str  # "images" | "sequences"


@dataclass(frozen=True)
class PivotNN:
    """Framework-independent network: ordered modules in execution order,
    optional training configuration, datasets and canonical input shape.

    Declaration order doubles as topological order; extractors emit modules
    in execution order. Nested networks referenced by SubNN modules live in
    ``subnets``.
    """

    name: str
    modules: tuple
    input_shape: TensorShape | None = None
    config: TrainingConfig | None = None
    datasets: tuple = ()
    subnets: tuple = ()
    symbols: tuple = ()  # (name, initializer source) for dynamic activations

    def __init__(self, name, modules, input_shape=None, config=None,
                 datasets=(), subnets=(), symbols=()):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "modules", tuple(modules))
        object.__setattr__(self, "input_shape", input_shape)
        object.__setattr__(self, "config", config)
        object.__setattr__(self, "datasets", tuple(datasets))
        object.__setattr__(self, "subnets", tuple(subnets))
        object.__setattr__(self, "symbols", tuple(tuple(s) for s in symbols))

    def module(self, name: str) -> ModuleSpec:
        for m in self.modules:
            if m.name == name:
                return m
        raise KeyError(name)

    def module_names(self) -> tuple:
        return tuple(m.name for m in self.modules)

    def subnet(self, name: str) -> "PivotNN":
        for s in self.subnets:
            if s.name == name:
                return s
        raise KeyError(name)

    def consumers(self) -> dict:
        """Map each producer name (and INPUT) to the modules consuming it."""
        out = {INPUT: []}
        for m in self.modules:
            out.setdefault(m.name, [])
        for m in self.modules:
            for src in m.inputs:
                out.setdefault(src, []).append(m.name)
        return out

    def terminals(self) -> tuple:
        """Modules whose output no other module consumes."""
        used = self.consumers()
        return tuple(m.name for m in self.modules if not used[m.name])

    def replace(self, **changes) -> "PivotNN":
        fields = {"name": self.name, "modules": self.modules,
                  "input_shape": self.input_shape, "config": self.config,
                  "datasets": self.datasets, "subnets": self.subnets,
                  "symbols": self.symbols}
        fields.update(changes)
        return PivotNN(**fields)
