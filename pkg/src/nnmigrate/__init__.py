"""nnmigrate: source-to-source migration of neural-network definition code
between the channel-last and channel-first framework dialects via a
framework-independent pivot model."""

from .api import MigrationResult, migrate_source
from .codegen import EmitTarget, build_plan, emit, plan_permutes
from .frontend import Dialect, detect_dialect, extract, parse_source
from .pivot import (
    ActivationRef, DatasetRef, LayerSpec, ModuleSpec, PivotNN, TensorOpSpec,
    TensorShape, TrainingConfig, deserialize, serialize, topo_order, validate,
)
from .shapes import ShapeAnnotation, infer_missing_inputs, propagate

__version__ = "0.1.0"

__all__ = [
    "migrate_source", "MigrationResult",
    "parse_source", "detect_dialect", "extract", "Dialect",
    "validate", "serialize", "deserialize", "topo_order",
    "propagate", "infer_missing_inputs", "ShapeAnnotation",
    "build_plan", "plan_permutes", "emit", "EmitTarget",
    "PivotNN", "ModuleSpec", "LayerSpec", "TensorOpSpec", "ActivationRef",
    "TensorShape", "TrainingConfig", "DatasetRef",
    "__version__",
]
