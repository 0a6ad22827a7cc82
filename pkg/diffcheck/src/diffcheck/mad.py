"""Max-absolute-difference comparison over seeded random inputs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import OutputShapeMismatch
from .loading import load_model, run_model
from .weights import copy_weights

DEFAULT_TRIALS = 100
DEFAULT_BATCH = 4


@dataclass
class MadReport:
    network: str
    direction: str       # e.g. "tf->pt"
    trials: int
    mads: list = field(default_factory=list)
    max_mad: float = 0.0
    seed: int = 0
    input_kind: str = "standard_normal"  # or "uniform_int(vocab)"
    batch_size: int = DEFAULT_BATCH
    input_shape: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "network": self.network,
            "direction": self.direction,
            "trials": self.trials,
            "per_trial_mad": [float(m) for m in self.mads],
            "max_mad": float(self.max_mad),
            "seed": self.seed,
            "input_kind": self.input_kind,
            "batch_size": self.batch_size,
            "input_shape": list(self.input_shape),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def mad_compare(source_path, migrated_path, input_shape=None,
                trials: int = DEFAULT_TRIALS, seed: int = 0,
                batch_size: int = DEFAULT_BATCH) -> MadReport:
    """Copy the source network's weights onto the migrated one, feed both
    the same seeded random inputs and report per-trial MAD statistics.

    Inputs are standard normal floats, or uniform integer indices when the
    networks start with an embedding. Trials run sequentially, and both
    frameworks' initializers are seeded before the models are instantiated,
    so a seed reproduces the report exactly.
    """
    _seed_frameworks(seed)
    source = load_model(source_path, input_shape)
    migrated = load_model(migrated_path, input_shape)
    copy_weights(source, migrated)

    dims = tuple(input_shape) if input_shape else source.input_dims
    vocab = source.vocab_size
    rng = np.random.default_rng(seed)
    report = MadReport(
        network=_stem(source_path),
        direction=f"{source.framework}->{migrated.framework}",
        trials=trials,
        seed=seed,
        input_kind=(f"uniform_int({vocab})" if vocab else "standard_normal"),
        batch_size=batch_size,
        input_shape=dims,
    )

    for _ in range(trials):
        if vocab:
            batch = rng.integers(0, vocab, size=(batch_size,) + dims,
                                 dtype=np.int64)
        else:
            batch = rng.standard_normal((batch_size,) + dims,
                                        dtype=np.float32)
        out_a = run_model(source, batch)
        out_b = run_model(migrated, batch)
        if out_a.shape != out_b.shape:
            raise OutputShapeMismatch(
                f"outputs disagree: {out_a.shape} vs {out_b.shape}")
        report.mads.append(float(np.max(np.abs(out_a - out_b))))

    report.max_mad = max(report.mads) if report.mads else 0.0
    return report


def _seed_frameworks(seed: int):
    """Seed both frameworks' initializers so model construction at import
    time is reproducible."""
    import torch

    torch.manual_seed(seed)
    try:
        import keras

        keras.utils.set_random_seed(seed)
    except ImportError:
        pass


def _stem(path):
    from pathlib import Path

    return Path(path).stem
