"""Cross-framework weight transfer with per-kind layout adjustment.

The canonical tensor layout is the channel-last framework's storage order
(keras ``get_weights``): dense kernels are (in, out), convolution kernels
(spatial..., in, out), recurrent kernels (in, gates*hidden). The
channel-first side transposes kernels and splits the single recurrent bias
into its two-bias form (input bias carried, hidden bias zeroed).

Gate-block orderings, committed as data:
  * keras LSTM kernels are stored as [input, forget, cell, output]
    (keras/layers/rnn/lstm.py, LSTMCell.build); torch.nn.LSTM stores
    W_ii|W_if|W_ig|W_io (torch.nn.LSTM docs) -- the same order.
  * keras GRU kernels are stored as [update z, reset r, candidate h] with
    reset_after=True biases of shape (2, 3*hidden)
    (keras/layers/rnn/gru.py); torch.nn.GRU stores W_ir|W_iz|W_in
    (torch.nn.GRU docs) -- requires the z,r <-> r,z block swap.
  * torch applies the reset gate after the hidden matmul, matching
    keras's reset_after=True default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LayerCountMismatch, WeightShapeMismatch
from .loading import PT, TF

# canonical gate order per kind, and each framework's storage order
GATE_ORDERS = {
    "lstm": {"canonical": ("i", "f", "g", "o"),
             TF: ("i", "f", "g", "o"),
             PT: ("i", "f", "g", "o")},
    "gru": {"canonical": ("z", "r", "n"),
            TF: ("z", "r", "n"),
            PT: ("r", "z", "n")},
    "rnn": {"canonical": ("h",), TF: ("h",), PT: ("h",)},
}


@dataclass
class Unit:
    """One learnable building block paired across the two models."""

    kind: str            # dense | conv | embedding | rnn | lstm | gru
    framework: str
    obj: object
    bidirectional: bool = False

    def vocab_size(self):
        if self.kind != "embedding":
            return None
        if self.framework == PT:
            return self.obj.num_embeddings
        return int(self.obj.input_dim)  # available before the layer is built


# --- unit discovery -----------------------------------------------------------

_PT_KINDS = None


def _pt_kind(module):
    import torch.nn as nn

    table = [
        (nn.Linear, "dense"),
        ((nn.Conv1d, nn.Conv2d, nn.Conv3d), "conv"),
        (nn.Embedding, "embedding"),
        (nn.LSTM, "lstm"),
        (nn.GRU, "gru"),
        (nn.RNN, "rnn"),
    ]
    for cls, kind in table:
        if isinstance(module, cls):
            return kind
    return None


def _tf_kind(layer):
    name = type(layer).__name__
    table = {
        "Dense": "dense",
        "Conv1D": "conv", "Conv2D": "conv", "Conv3D": "conv",
        "Embedding": "embedding",
        "LSTM": "lstm", "GRU": "gru", "SimpleRNN": "rnn",
    }
    return table.get(name)


def learnable_units(framework, model) -> list:
    """Learnable building blocks in declaration order, containers flattened."""
    if framework == PT:
        return _pt_units(model)
    return _tf_units(model)


def _pt_units(model):
    units = []
    kind = _pt_kind(model)
    if kind is not None:
        bidi = bool(getattr(model, "bidirectional", False))
        return [Unit(kind, PT, model, bidi)]
    for child in model.children():
        units.extend(_pt_units(child))
    return units


def _tf_units(model):
    units = []
    for layer in model.layers:
        name = type(layer).__name__
        if name == "Bidirectional":
            inner_kind = _tf_kind(layer.forward_layer)
            units.append(Unit(inner_kind, TF, layer, bidirectional=True))
            continue
        kind = _tf_kind(layer)
        if kind is not None:
            units.append(Unit(kind, TF, layer))
        elif hasattr(layer, "layers"):  # nested model / sequential
            units.extend(_tf_units(layer))
    return units


# --- canonical weight form ------------------------------------------------------

def _conv_to_canonical_axes(rank):
    # channel-first storage (out, in, spatial...) -> (spatial..., in, out)
    return tuple(range(2, rank)) + (1, 0)


def _conv_from_canonical_axes(rank):
    # (spatial..., in, out) -> (out, in, spatial...)
    return (rank - 1, rank - 2) + tuple(range(rank - 2))


def _permute_gate_blocks(matrix, hidden, from_order, to_order, axis=-1):
    """Reorder the gate blocks of a stacked kernel/bias along an axis."""
    if from_order == to_order:
        return matrix
    blocks = np.split(matrix, len(from_order), axis=axis)
    by_gate = dict(zip(from_order, blocks))
    return np.concatenate([by_gate[g] for g in to_order], axis=axis)


def _pt_param(obj, name):
    return obj._parameters[name].detach().numpy() if name in obj._parameters \
        else getattr(obj, name).detach().numpy()


def _pt_rnn_direction(unit, suffix):
    """Canonical [kernel, recurrent, bias...] for one direction."""
    obj = unit.obj
    hidden = obj.hidden_size
    order = GATE_ORDERS[unit.kind][PT]
    canonical = GATE_ORDERS[unit.kind]["canonical"]
    w_ih = _pt_param(obj, f"weight_ih_l0{suffix}").T  # (in, G*H)
    w_hh = _pt_param(obj, f"weight_hh_l0{suffix}").T
    b_ih = _pt_param(obj, f"bias_ih_l0{suffix}")
    b_hh = _pt_param(obj, f"bias_hh_l0{suffix}")
    kernel = _permute_gate_blocks(w_ih, hidden, order, canonical)
    recurrent = _permute_gate_blocks(w_hh, hidden, order, canonical)
    b_in = _permute_gate_blocks(b_ih, hidden, order, canonical)
    b_rec = _permute_gate_blocks(b_hh, hidden, order, canonical)
    if unit.kind == "gru":
        # two-bias form survives: keras reset_after biases are (2, 3H)
        return [kernel, recurrent, np.stack([b_in, b_rec])]
    return [kernel, recurrent, b_in + b_rec]


def _pt_rnn_set_direction(unit, suffix, weights):
    import torch

    obj = unit.obj
    hidden = obj.hidden_size
    order = GATE_ORDERS[unit.kind][PT]
    canonical = GATE_ORDERS[unit.kind]["canonical"]
    kernel, recurrent, bias = weights
    w_ih = _permute_gate_blocks(kernel, hidden, canonical, order).T
    w_hh = _permute_gate_blocks(recurrent, hidden, canonical, order).T
    if unit.kind == "gru":
        b_in = _permute_gate_blocks(bias[0], hidden, canonical, order)
        b_rec = _permute_gate_blocks(bias[1], hidden, canonical, order)
    else:
        b_in = _permute_gate_blocks(bias, hidden, canonical, order)
        b_rec = np.zeros_like(b_in)
    with torch.no_grad():
        getattr(obj, f"weight_ih_l0{suffix}").copy_(
            torch.from_numpy(np.ascontiguousarray(w_ih)))
        getattr(obj, f"weight_hh_l0{suffix}").copy_(
            torch.from_numpy(np.ascontiguousarray(w_hh)))
        getattr(obj, f"bias_ih_l0{suffix}").copy_(
            torch.from_numpy(np.ascontiguousarray(b_in)))
        getattr(obj, f"bias_hh_l0{suffix}").copy_(
            torch.from_numpy(np.ascontiguousarray(b_rec)))


def to_canonical(unit: Unit) -> list:
    """Unit weights in the canonical (channel-last storage) form."""
    if unit.framework == TF:
        return [np.asarray(w) for w in unit.obj.get_weights()]

    obj = unit.obj
    if unit.kind == "dense":
        return [_pt_param(obj, "weight").T, _pt_param(obj, "bias")]
    if unit.kind == "conv":
        weight = _pt_param(obj, "weight")
        return [weight.transpose(_conv_to_canonical_axes(weight.ndim)),
                _pt_param(obj, "bias")]
    if unit.kind == "embedding":
        return [_pt_param(obj, "weight")]
    weights = _pt_rnn_direction(unit, "")
    if unit.bidirectional:
        weights += _pt_rnn_direction(unit, "_reverse")
    return weights


def from_canonical(unit: Unit, weights: list):
    """Install canonical-form weights into a unit, adjusting the layout."""
    if unit.framework == TF:
        current = unit.obj.get_weights()
        _check_shapes(unit, [w.shape for w in current],
                      [w.shape for w in weights])
        unit.obj.set_weights(weights)
        return

    import torch

    obj = unit.obj
    if unit.kind == "dense":
        _assign_pt(obj, "weight", weights[0].T)
        _assign_pt(obj, "bias", weights[1])
    elif unit.kind == "conv":
        kernel = weights[0]
        _assign_pt(obj, "weight",
                   kernel.transpose(_conv_from_canonical_axes(kernel.ndim)))
        _assign_pt(obj, "bias", weights[1])
    elif unit.kind == "embedding":
        _assign_pt(obj, "weight", weights[0])
    else:
        per_direction = 3
        _pt_rnn_set_direction(unit, "", weights[:per_direction])
        if unit.bidirectional:
            if len(weights) != 2 * per_direction:
                raise WeightShapeMismatch(
                    f"{unit.kind}: expected forward and backward weight sets")
            _pt_rnn_set_direction(unit, "_reverse", weights[per_direction:])


def _assign_pt(obj, name, value):
    import torch

    param = getattr(obj, name)
    if tuple(param.shape) != tuple(value.shape):
        raise WeightShapeMismatch(
            f"{type(obj).__name__}.{name}: target {tuple(param.shape)} vs "
            f"source {tuple(value.shape)}")
    with torch.no_grad():
        param.copy_(torch.from_numpy(np.ascontiguousarray(value)))


def _check_shapes(unit, target_shapes, source_shapes):
    if [tuple(s) for s in target_shapes] != [tuple(s) for s in source_shapes]:
        raise WeightShapeMismatch(
            f"{unit.kind}: target expects {target_shapes}, source provides "
            f"{source_shapes}")


def copy_weights(source, target):
    """Copy every learnable tensor from source to target, layout-adjusted.

    Both arguments are LoadedModel instances (or (framework, model) pairs).
    The architectures must correspond unit for unit, which migration
    guarantees.
    """
    src_fw, src_model = _as_pair(source)
    dst_fw, dst_model = _as_pair(target)
    src_units = learnable_units(src_fw, src_model)
    dst_units = learnable_units(dst_fw, dst_model)
    if len(src_units) != len(dst_units):
        raise LayerCountMismatch(
            f"source has {len(src_units)} learnable units, target "
            f"{len(dst_units)}")
    for src_unit, dst_unit in zip(src_units, dst_units):
        if src_unit.kind != dst_unit.kind or \
                src_unit.bidirectional != dst_unit.bidirectional:
            raise LayerCountMismatch(
                f"unit kind mismatch: {src_unit.kind} vs {dst_unit.kind}")
        from_canonical(dst_unit, to_canonical(src_unit))


def _as_pair(loaded):
    if isinstance(loaded, tuple):
        return loaded
    return loaded.framework, loaded.model
