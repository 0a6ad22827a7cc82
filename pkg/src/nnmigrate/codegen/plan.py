"""Emission planning: ordered records plus channel-layout permute injection.

``build_plan`` turns a validated pivot into per-module emission records
(variable wiring, sanitized names) in topological order. ``plan_permutes``
then wraps each maximal contiguous run of channel-sensitive modules with a
channel-last-to-channel-first adapter permute and its inverse when the
target framework is channel-first, so flattened element order matches the
channel-last source exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import registry as R
from ..pivot import types as T
from ..pivot.topo import topo_order
from ..shapes import ShapeAnnotation
from ..frontend.common import NameAllocator

INPUT_VAR = "x"


@dataclass
class PlanRecord:
    module: T.ModuleSpec
    emitted_name: str
    input_vars: list
    output_var: str
    pre_ops: list = field(default_factory=list)
    post_ops: list = field(default_factory=list)
    in_channel_first_region: bool = False
    sub_plan: "GenPlan | None" = None


@dataclass
class GenPlan:
    records: list
    input_var: str = INPUT_VAR

    def record(self, name: str) -> PlanRecord:
        for r in self.records:
            if r.module.name == name:
                return r
        raise KeyError(name)

    def output_record(self) -> PlanRecord:
        consumed = set()
        for r in self.records:
            consumed.update(r.module.inputs)
        for r in self.records:
            if r.module.name not in consumed:
                return r
        return self.records[-1]


def build_plan(nn: T.PivotNN, ann: ShapeAnnotation | None) -> GenPlan:
    """Records in topological order with collision-free emitted names."""
    topo_order(nn)  # asserts declaration order is a valid topological order

    names = NameAllocator()
    emitted = {}
    for m in nn.modules:
        emitted[m.name] = names.claim(m.name)

    records = []
    var_of = {T.INPUT: INPUT_VAR}
    for m in nn.modules:
        out_var = f"x_{emitted[m.name]}"
        rec = PlanRecord(
            module=m,
            emitted_name=emitted[m.name],
            input_vars=[var_of[src] for src in m.inputs],
            output_var=out_var,
        )
        if m.subnn is not None:
            sub_ann = ann.subnets.get(m.name) if ann is not None else None
            rec.sub_plan = build_plan(nn.subnet(m.subnn), sub_ann)
        var_of[m.name] = out_var
        records.append(rec)
    return GenPlan(records=records)


def plan_permutes(plan: GenPlan, ann: ShapeAnnotation | None, target) -> GenPlan:
    """Inject adapter permutes for channel-first targets; no-op otherwise."""
    if target.framework != R.PT:
        return plan

    consumers = {}
    for rec in plan.records:
        for src in rec.module.inputs:
            consumers[src] = consumers.get(src, 0) + 1

    def channel_sensitive(rec):
        return (rec.module.layer is not None
                and rec.module.layer.kind in T.CHANNEL_SENSITIVE_KINDS)

    runs = []
    current = []
    for rec in plan.records:
        chains = (bool(current)
                  and list(rec.module.inputs) == [current[-1].module.name]
                  and consumers.get(current[-1].module.name, 0) == 1)
        if channel_sensitive(rec) and (not current or chains):
            current.append(rec)
            continue
        if current:
            runs.append(current)
        current = [rec] if channel_sensitive(rec) else []
    if current:
        runs.append(current)

    for run in runs:
        first, last = run[0], run[-1]
        if ann is not None:
            rank = ann.inputs_of(first.module.name)[0].rank
        else:
            rank = T.SPATIAL_RANK[first.module.layer.kind] + 2
        to_first, to_last = R.permute_orders(rank)
        first.pre_ops.append(T.TensorOpSpec(T.PERMUTE, {"order": to_first}))
        last.post_ops.append(T.TensorOpSpec(T.PERMUTE, {"order": to_last}))
        for rec in run:
            rec.in_channel_first_region = True

    for rec in plan.records:
        if rec.sub_plan is not None:
            sub_ann = ann.subnets.get(rec.module.name) if ann is not None else None
            plan_permutes(rec.sub_plan, sub_ann, target)
    return plan
