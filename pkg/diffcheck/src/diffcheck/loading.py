"""Model loading: import a network definition file and locate its model."""

from __future__ import annotations

import importlib.util
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DiffcheckError

TF = "tf"
PT = "pt"

_counter = 0


@dataclass
class LoadedModel:
    path: str
    framework: str
    model: object
    input_dims: tuple | None  # declared INPUT_SHAPE, batch excluded
    vocab_size: int | None    # set when an embedding consumes the input


def _import_file(path: Path):
    global _counter
    _counter += 1
    name = f"_diffcheck_loaded_{_counter}_{path.stem}"
    spec = importlib.util.spec_from_file_location(name, path)
    module = importlib.util.module_from_spec(spec)
    sys.modules[name] = module
    spec.loader.exec_module(module)
    return module


def _find_model(module):
    import torch

    candidates = []
    preferred = getattr(module, "model", None)
    values = ([preferred] if preferred is not None else []) + \
        list(vars(module).values())
    for value in values:
        if isinstance(value, torch.nn.Module):
            return PT, value
        cls = type(value)
        mro_names = {f"{c.__module__}.{c.__name__}" for c in cls.__mro__}
        if any(name.endswith(".Model") and
               ("keras" in name or "tensorflow" in name)
               for name in mro_names):
            candidates.append((TF, value))
    if candidates:
        return candidates[0]
    raise DiffcheckError(f"no model object found in {module.__name__}")


def _builtin_input_dims(framework, model):
    """Channel-last models constructed with a declared input know their
    shape without a dummy pass."""
    if framework != TF:
        return None
    try:
        inputs = model.inputs
    except (AttributeError, ValueError):
        return None
    if not inputs:
        return None
    dims = tuple(int(d) for d in inputs[0].shape[1:] if d is not None)
    return dims or None


def _embedding_vocab(framework, model):
    from .weights import learnable_units

    units = learnable_units(framework, model)
    if units and units[0].kind == "embedding":
        return units[0].vocab_size()
    return None


def load_model(path, input_dims: tuple | None = None) -> LoadedModel:
    """Import a network file, locate the model object and prepare it for
    inference (evaluation mode; built with a dummy forward pass)."""
    path = Path(path)
    if not path.is_file():
        raise DiffcheckError(f"model file not found: {path}")
    module = _import_file(path)
    framework, model = _find_model(module)

    declared = getattr(module, "INPUT_SHAPE", None)
    if declared is not None:
        declared = tuple(declared)
    dims = input_dims or declared or _builtin_input_dims(framework, model)
    if dims is None:
        raise DiffcheckError(
            f"{path}: no input shape; file declares none and no --shape given")

    loaded = LoadedModel(path=str(path), framework=framework, model=model,
                         input_dims=tuple(dims), vocab_size=None)
    loaded.vocab_size = _embedding_vocab(framework, model)
    _prepare(loaded)
    return loaded


def _dummy_input(loaded: LoadedModel, batch=1):
    shape = (batch,) + loaded.input_dims
    if loaded.vocab_size is not None:
        return np.zeros(shape, dtype=np.int64)
    return np.zeros(shape, dtype=np.float32)


def _prepare(loaded: LoadedModel):
    """Run one dummy forward pass: builds lazy weights on the channel-last
    side and verifies the file actually executes."""
    run_model(loaded, _dummy_input(loaded))
    if loaded.framework == PT:
        loaded.model.eval()  # dropout must not fire during comparison


def run_model(loaded: LoadedModel, batch: np.ndarray) -> np.ndarray:
    if loaded.framework == PT:
        import torch

        tensor = torch.from_numpy(batch)
        with torch.no_grad():
            out = loaded.model(tensor)
        return out.detach().numpy()
    out = loaded.model(batch, training=False)
    return np.asarray(out)
