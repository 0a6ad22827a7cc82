"""Emission planning: record wiring, name sanitization, permute injection."""

from nnmigrate import EmitTarget, build_plan, plan_permutes, propagate
from nnmigrate.pivot import types as T

from conftest import fixture_pivot


def shape(*dims):
    return T.TensorShape((T.BATCH,) + tuple(dims))


def linear(name, inputs, n=8):
    return T.ModuleSpec(name, inputs,
                        layer=T.LayerSpec(T.LINEAR, {"out_features": n}))


def make_plan(nn, dims, target=None):
    ann = propagate(nn, shape(*dims))
    plan = build_plan(nn, ann)
    if target is not None:
        plan = plan_permutes(plan, ann, target)
    return plan


def test_three_layer_chain_variable_wiring():
    nn = T.PivotNN("Net", [linear("a", [T.INPUT]), linear("b", ["a"]),
                           linear("c", ["b"])])
    plan = make_plan(nn, (4,))
    assert [r.emitted_name for r in plan.records] == ["a", "b", "c"]
    assert plan.records[0].input_vars == ["x"]
    assert plan.records[1].input_vars == ["x_a"]
    assert plan.records[2].input_vars == ["x_b"]


def test_cnn_rnn_join_inputs():
    nn = fixture_pivot("cnn_rnn_tf_subclassing")
    plan = make_plan(nn, (20,))
    join = plan.record("concatenate")
    assert join.input_vars == ["x_pool1", "x_pool2", "x_pool3"]


def test_name_clash_deterministic_suffixing():
    # Bypasses identifier validation to exercise sanitization fallback.
    nn = T.PivotNN("Net", [
        linear("layer", [T.INPUT]),
        linear("layer_1", ["layer"]),
        linear("layer?1", ["layer_1"]),  # sanitizes into a duplicate
    ])
    plan = build_plan(nn, None)
    names = [r.emitted_name for r in plan.records]
    assert names == ["layer", "layer_1", "layer_1_1"]
    assert len(set(names)) == 3


class TestPermutePlanning:
    def test_single_run_wraps_conv_pool_conv_before_flatten(self):
        nn = T.PivotNN("Net", [
            T.ModuleSpec("c1", [T.INPUT], layer=T.LayerSpec(
                T.CONV2D, {"out_channels": 4, "in_channels": 3,
                           "kernel": (3, 3), "stride": (1, 1),
                           "padding": "same"})),
            T.ModuleSpec("p1", ["c1"], layer=T.LayerSpec(
                T.MAXPOOL2D, {"kernel": (2, 2), "stride": (2, 2),
                              "padding": "valid"})),
            T.ModuleSpec("c2", ["p1"], layer=T.LayerSpec(
                T.CONV2D, {"out_channels": 8, "in_channels": 4,
                           "kernel": (3, 3), "stride": (1, 1),
                           "padding": "same"})),
            T.ModuleSpec("f", ["c2"], layer=T.LayerSpec(T.FLATTEN, {})),
        ])
        plan = make_plan(nn, (8, 8, 3), EmitTarget("pt", "subclassing"))
        assert plan.record("c1").pre_ops[0].params["order"] == (0, 3, 1, 2)
        assert plan.record("p1").pre_ops == [] and plan.record("p1").post_ops == []
        assert plan.record("c2").post_ops[0].params["order"] == (0, 2, 3, 1)
        assert plan.record("f").pre_ops == []  # inverse lands before flatten

    def test_no_conv_plan_unchanged(self):
        nn = T.PivotNN("Net", [linear("a", [T.INPUT]), linear("b", ["a"])])
        plan = make_plan(nn, (4,), EmitTarget("pt", "subclassing"))
        assert all(not r.pre_ops and not r.post_ops for r in plan.records)

    def test_channel_last_target_is_noop(self):
        nn = fixture_pivot("tf_tutorial_sequential")
        plan = make_plan(nn, (32, 32, 3), EmitTarget("tf", "subclassing"))
        assert all(not r.pre_ops and not r.post_ops for r in plan.records)

    def test_injected_pairs_compose_to_identity_and_are_even(self):
        for stem, dims in [("tf_tutorial_sequential", (32, 32, 3)),
                           ("alexnet_pt_subclassing", (32, 32, 3)),
                           ("vgg16_pt_subclassing", (32, 32, 3)),
                           ("cnn_rnn_tf_subclassing", (20,))]:
            nn = fixture_pivot(stem)
            plan = make_plan(nn, dims, EmitTarget("pt", "subclassing"))
            injected = []
            for rec in plan.records:
                injected.extend(rec.pre_ops)
                injected.extend(rec.post_ops)
            assert len(injected) % 2 == 0, stem
            openers = [op for r in plan.records for op in r.pre_ops]
            closers = [op for r in plan.records for op in r.post_ops]
            assert len(openers) == len(closers)
            for opener, closer in zip(openers, closers):
                order = opener.params["order"]
                inverse = closer.params["order"]
                composed = tuple(order[inverse[i]] for i in range(len(order)))
                assert composed == tuple(range(len(order))), stem

    def test_branches_get_separate_pairs(self):
        nn = fixture_pivot("cnn_rnn_tf_subclassing")
        plan = make_plan(nn, (20,), EmitTarget("pt", "subclassing"))
        for conv, pool in [("conv1", "pool1"), ("conv2", "pool2"),
                           ("conv3", "pool3")]:
            assert plan.record(conv).pre_ops[0].params["order"] == (0, 2, 1)
            assert plan.record(pool).post_ops[0].params["order"] == (0, 2, 1)

    def test_rank3_adapter_is_self_inverse(self):
        nn = fixture_pivot("cnn_rnn_tf_subclassing")
        plan = make_plan(nn, (20,), EmitTarget("pt", "subclassing"))
        order = plan.record("conv1").pre_ops[0].params["order"]
        assert tuple(order[order[i]] for i in range(3)) == (0, 1, 2)
