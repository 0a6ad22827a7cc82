"""Framework-independent pivot model: types, validation, ordering, JSON format."""

from .types import (
    ADD, AVGPOOL1D, AVGPOOL2D, AVGPOOL3D, AVGPOOL_KINDS, BATCH,
    CHANNEL_SENSITIVE_KINDS, CONCATENATE, CONV1D, CONV2D, CONV3D, CONV_KINDS,
    DROPOUT, EMBEDDING, FLATTEN, GRU, INPUT, INPUT_DIM_ATTR, JOIN_OPS,
    LAYER_KINDS, LINEAR, LSTM, MATMUL, MAXPOOL1D, MAXPOOL2D, MAXPOOL3D,
    MAXPOOL_KINDS, MULTIPLY, OP_KINDS, PADDING_SAME, PADDING_VALID, PERMUTE,
    POOL_KINDS, RESHAPE, RNN_KINDS, SIMPLERNN, SPATIAL_RANK,
    SUPPORTED_ACTIVATIONS, TRANSPOSE, ActivationRef, DatasetRef, LayerSpec,
    ModuleSpec, PivotNN, TensorOpSpec, TensorShape, TrainingConfig, batched,
)
from .schema import LAYER_SCHEMAS, OP_SCHEMAS, normalize_layer_attrs
from .serialize import SCHEMA_VERSION, deserialize, from_json_dict, serialize, to_json_dict
from .topo import edges, topo_order
from .validate import validate

__all__ = [
    "ActivationRef", "DatasetRef", "LayerSpec", "ModuleSpec", "PivotNN",
    "TensorOpSpec", "TensorShape", "TrainingConfig", "BATCH", "INPUT",
    "batched", "validate", "topo_order", "edges", "serialize", "deserialize",
    "to_json_dict", "from_json_dict", "SCHEMA_VERSION",
    "normalize_layer_attrs", "LAYER_SCHEMAS", "OP_SCHEMAS",
]
