"""Module collection and graph post-passes shared by the extractors.

Extractors append mutable records in execution order; the post-passes then
fold explicit zero-padding layers into the convolution they feed and strip
channel-layout adapter permutes (the channel-first dialect's idiom for
consuming channel-last canonical data) so the pivot stays dialect-neutral.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import registry as R
from ..diagnostics import UnsupportedConstructError, UnsupportedLayerError
from ..pivot import types as T
from .common import NameAllocator


@dataclass
class Rec:
    """Mutable precursor of a ModuleSpec."""

    name: str
    inputs: list
    layer: T.LayerSpec | None = None
    op: T.TensorOpSpec | None = None
    subnn: str | None = None
    span: tuple | None = None
    zeropad: tuple | None = None  # (padding, nd) pseudo-record, folded away


class Collector:
    def __init__(self):
        self.records: list[Rec] = []
        self.names = NameAllocator()
        self.by_name: dict[str, Rec] = {}

    def allocate(self, explicit: str | None, base: str) -> str:
        if explicit:
            return self.names.claim(explicit)
        return self.names.synthesize(base)

    def add(self, rec: Rec) -> str:
        self.records.append(rec)
        self.by_name[rec.name] = rec
        return rec.name

    def add_layer(self, spec, inputs, explicit_name=None, span=None) -> str:
        name = self.allocate(explicit_name, spec.kind)
        return self.add(Rec(name, list(inputs), layer=spec, span=span))

    def add_op(self, op, inputs, explicit_name=None, span=None) -> str:
        name = self.allocate(explicit_name, op.kind)
        return self.add(Rec(name, list(inputs), op=op, span=span))

    def add_subnn(self, ref, inputs, explicit_name=None, span=None) -> str:
        name = self.allocate(explicit_name, ref.lower())
        return self.add(Rec(name, list(inputs), subnn=ref, span=span))

    def add_zeropad(self, padding, nd, inputs, explicit_name=None, span=None) -> str:
        name = self.allocate(explicit_name, "zero_padding")
        return self.add(Rec(name, list(inputs), zeropad=(padding, nd), span=span))

    def fold_activation(self, producer: str, act: T.ActivationRef, span=None):
        """Attach a standalone activation to the layer that produced its input."""
        if producer == T.INPUT:
            raise UnsupportedConstructError(
                "activation applied directly to the network input",
                line=span[0] if span else None)
        rec = self.by_name[producer]
        foldable = rec.layer is not None and (
            rec.layer.kind == T.LINEAR or rec.layer.kind in T.CONV_KINDS)
        if not foldable:
            raise UnsupportedConstructError(
                f"standalone activation after '{producer}' cannot be folded "
                "into a layer attribute", line=span[0] if span else None)
        if not rec.layer.activation.is_none:
            raise UnsupportedConstructError(
                f"layer '{producer}' already has an activation",
                line=span[0] if span else None)
        rec.layer = T.LayerSpec(rec.layer.kind, rec.layer.attrs, act)

    def set_return_sequences(self, producer: str, value: bool, span=None):
        rec = self.by_name.get(producer)
        if rec is None or rec.layer is None or rec.layer.kind not in T.RNN_KINDS:
            raise UnsupportedConstructError(
                "last-time-step slice applies only to a recurrent output",
                line=span[0] if span else None)
        rec.layer = T.LayerSpec(rec.layer.kind,
                                rec.layer.with_attrs(return_sequences=value).attrs,
                                rec.layer.activation)

    # --- post-passes --------------------------------------------------------

    def consumer_map(self) -> dict:
        out = {r.name: [] for r in self.records}
        out[T.INPUT] = []
        for r in self.records:
            for src in r.inputs:
                out.setdefault(src, []).append(r.name)
        return out

    def fold_zero_padding(self):
        """Fold ZeroPadding records into the convolution consuming them."""
        for rec in [r for r in self.records if r.zeropad is not None]:
            consumers = self.consumer_map()[rec.name]
            target = self.by_name[consumers[0]] if len(consumers) == 1 else None
            padding, nd = rec.zeropad
            ok = (target is not None and target.layer is not None
                  and target.layer.kind in T.CONV_KINDS
                  and T.SPATIAL_RANK[target.layer.kind] == nd
                  and target.layer.get("padding") == T.PADDING_VALID)
            if not ok:
                raise UnsupportedLayerError(
                    f"zero-padding '{rec.name}' does not feed exactly one "
                    "valid-padded convolution of matching rank",
                    line=rec.span[0] if rec.span else None)
            target.layer = target.layer.with_attrs(padding=padding)
            target.inputs = list(rec.inputs)
            self._remove(rec)

    def strip_layout_adapters(self):
        """Remove matched channel-layout permute pairs around conv/pool runs.

        A leading channel-last-to-channel-first permute, a chain of
        channel-sensitive layers, and the inverse permute express plain
        channel-last semantics; the pair is dropped and the edges rewired.
        """
        changed = True
        while changed:
            changed = False
            consumers = self.consumer_map()
            for rec in self.records:
                if not self._is_permute(rec):
                    continue
                order = tuple(rec.op.params["order"])
                to_first, to_last = R.permute_orders(len(order))
                if order != to_first:
                    continue
                run = []
                cur_consumers = consumers[rec.name]
                while len(cur_consumers) == 1:
                    nxt = self.by_name[cur_consumers[0]]
                    if (nxt.layer is not None
                            and nxt.layer.kind in T.CHANNEL_SENSITIVE_KINDS):
                        run.append(nxt)
                        cur_consumers = consumers[nxt.name]
                        continue
                    if (run and self._is_permute(nxt)
                            and tuple(nxt.op.params["order"]) == to_last
                            and len(nxt.op.params["order"]) == len(order)):
                        self._splice_pair(rec, run, nxt)
                        changed = True
                    break
                if changed:
                    break

    def _splice_pair(self, opener, run, closer):
        run[0].inputs = list(opener.inputs)
        for rec in self.records:
            rec.inputs = [run[-1].name if src == closer.name else src
                          for src in rec.inputs]
        self._remove(opener)
        self._remove(closer)

    @staticmethod
    def _is_permute(rec) -> bool:
        return rec.op is not None and rec.op.kind == T.PERMUTE

    def _remove(self, rec):
        self.records.remove(rec)
        del self.by_name[rec.name]

    def finalize(self) -> list:
        leftovers = [r.name for r in self.records if r.zeropad is not None]
        if leftovers:
            raise UnsupportedLayerError(
                f"unfolded zero-padding modules: {', '.join(leftovers)}")
        return [T.ModuleSpec(r.name, r.inputs, layer=r.layer, op=r.op,
                             subnn=r.subnn, span=r.span)
                for r in self.records]
