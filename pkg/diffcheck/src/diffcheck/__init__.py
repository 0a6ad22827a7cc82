"""Differential functional-equivalence harness for migrated networks.

Loads a source network and its migrated counterpart, copies the weights
across (transposing kernels between the two frameworks' storage layouts),
feeds both the same seeded random inputs, and reports max-absolute-difference
statistics.
"""

import os

# Keep the channel-last framework's math in plain float32 kernels so the
# comparison does not pick up oneDNN reassociation noise, and keep its C++
# logging quiet. Must be set before tensorflow is first imported.
os.environ.setdefault("TF_ENABLE_ONEDNN_OPTS", "0")
os.environ.setdefault("TF_CPP_MIN_LOG_LEVEL", "3")

from .errors import (  # noqa: E402
    DiffcheckError, LayerCountMismatch, OutputShapeMismatch, WeightShapeMismatch,
)
from .loading import LoadedModel, load_model  # noqa: E402
from .mad import MadReport, mad_compare  # noqa: E402
from .weights import copy_weights, learnable_units  # noqa: E402

__version__ = "0.1.0"

__all__ = [
    "load_model", "LoadedModel", "copy_weights", "learnable_units",
    "mad_compare", "MadReport", "DiffcheckError", "LayerCountMismatch",
    "OutputShapeMismatch", "WeightShapeMismatch", "__version__",
]
