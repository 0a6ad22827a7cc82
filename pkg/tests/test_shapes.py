"""Shape engine: transfer rules, oracle equivalence, inference, error paths."""

import pytest

from nnmigrate.diagnostics import (
    ConflictingAttributeError, NegativeDimError, ShapeMismatchError,
    UnresolvedBatchError,
)
from nnmigrate.pivot import types as T
from nnmigrate.shapes import infer_missing_inputs, propagate

from conftest import CORPUS, fixture_pivot
from shape_oracle import B, oracle_shapes


def shape(*dims):
    return T.TensorShape((T.BATCH,) + tuple(dims))


def as_oracle(ts):
    return tuple(B if d is T.BATCH else d for d in ts.dims)


def conv2d(name, inputs, out_channels, kernel, padding="valid", stride=(1, 1),
           in_channels=None, activation=None):
    attrs = {"out_channels": out_channels, "kernel": kernel, "stride": stride,
             "padding": padding}
    if in_channels is not None:
        attrs["in_channels"] = in_channels
    act = (T.ActivationRef.literal(activation) if activation
           else T.ActivationRef.none())
    return T.ModuleSpec(name, inputs, layer=T.LayerSpec(T.CONV2D, attrs, act))


class TestTransferRules:
    def test_valid_conv_shrinks_spatial(self):
        nn = T.PivotNN("Net", [conv2d("c", [T.INPUT], 32, (3, 3))])
        ann = propagate(nn, shape(32, 32, 3))
        assert ann.output_of("c") == shape(30, 30, 32)

    def test_tf_tutorial_stack_frozen_values(self):
        """Frozen expectations computed with the window-walking oracle."""
        nn = fixture_pivot("tf_tutorial_sequential")
        ann = propagate(nn, shape(32, 32, 3))
        expected = {
            "conv2d": shape(30, 30, 32),
            "maxpool2d": shape(15, 15, 32),
            "conv2d_1": shape(13, 13, 64),
            "maxpool2d_1": shape(6, 6, 64),
            "conv2d_2": shape(4, 4, 64),
            "flatten": shape(1024),
            "linear": shape(64),
            "linear_1": shape(10),
        }
        for name, want in expected.items():
            assert ann.output_of(name) == want, name

    def test_dropout_preserves_shape(self):
        nn = T.PivotNN("Net", [
            T.ModuleSpec("d", [T.INPUT],
                         layer=T.LayerSpec(T.DROPOUT, {"rate": 0.5})),
        ])
        ann = propagate(nn, shape(128))
        assert ann.output_of("d") == shape(128)

    def test_kernel_exceeding_spatial_dim(self):
        nn = T.PivotNN("Net", [conv2d("c", [T.INPUT], 8, (3, 3))])
        with pytest.raises(ShapeMismatchError):
            propagate(nn, shape(2, 2, 3))

    def test_same_padding_ceil_rule(self):
        nn = T.PivotNN("Net", [
            conv2d("c", [T.INPUT], 8, (3, 3), padding="same", stride=(2, 2)),
        ])
        ann = propagate(nn, shape(7, 7, 3))
        assert ann.output_of("c") == shape(4, 4, 8)  # ceil(7/2)

    def test_same_padding_stride_one_preserves_spatial(self):
        for extent in (5, 8, 13, 32):
            nn = T.PivotNN("Net", [
                conv2d("c", [T.INPUT], 4, (5, 5), padding="same"),
            ])
            ann = propagate(nn, shape(extent, extent, 3))
            assert ann.output_of("c") == shape(extent, extent, 4)

    def test_explicit_padding_rule(self):
        nn = T.PivotNN("Net", [conv2d("c", [T.INPUT], 8, (5, 5), padding=2)])
        ann = propagate(nn, shape(32, 32, 3))
        assert ann.output_of("c") == shape(32, 32, 8)

    def test_embedding_and_rnn_rules(self):
        nn = T.PivotNN("Net", [
            T.ModuleSpec("e", [T.INPUT], layer=T.LayerSpec(
                T.EMBEDDING, {"vocab_size": 100, "embedding_dim": 16})),
            T.ModuleSpec("r", ["e"], layer=T.LayerSpec(
                T.LSTM, {"hidden_size": 32, "return_sequences": True,
                         "bidirectional": True, "input_size": 16})),
            T.ModuleSpec("r2", ["r"], layer=T.LayerSpec(
                T.GRU, {"hidden_size": 8, "return_sequences": False,
                        "bidirectional": False, "input_size": 64})),
        ])
        ann = propagate(nn, shape(12))
        assert ann.output_of("e") == shape(12, 16)
        assert ann.output_of("r") == shape(12, 64)  # bidirectional doubles
        assert ann.output_of("r2") == shape(8)

    def test_concatenate_axis_sum_and_mismatch(self):
        def branchy(axis):
            return T.PivotNN("Net", [
                conv2d("a", [T.INPUT], 8, (3, 3), padding="same"),
                conv2d("b", [T.INPUT], 8, (5, 5), padding="same"),
                T.ModuleSpec("cat", ["a", "b"],
                             op=T.TensorOpSpec(T.CONCATENATE, {"axis": axis})),
            ])
        ann = propagate(branchy(3), shape(8, 8, 3))
        assert ann.output_of("cat") == shape(8, 8, 16)
        ann = propagate(branchy(-1), shape(8, 8, 3))
        assert ann.output_of("cat") == shape(8, 8, 16)

        bad = T.PivotNN("Net", [
            conv2d("a", [T.INPUT], 8, (3, 3)),
            conv2d("b", [T.INPUT], 8, (5, 5)),
            T.ModuleSpec("cat", ["a", "b"],
                         op=T.TensorOpSpec(T.CONCATENATE, {"axis": 3})),
        ])
        with pytest.raises(ShapeMismatchError):
            propagate(bad, shape(8, 8, 3))

    def test_permute_and_reshape(self):
        nn = T.PivotNN("Net", [
            T.ModuleSpec("p", [T.INPUT],
                         op=T.TensorOpSpec(T.PERMUTE, {"order": (0, 3, 1, 2)})),
            T.ModuleSpec("r", ["p"],
                         op=T.TensorOpSpec(T.RESHAPE, {"shape": (3, 16)})),
        ])
        ann = propagate(nn, shape(4, 4, 3))
        assert ann.output_of("p") == shape(3, 4, 4)
        assert ann.output_of("r") == shape(3, 16)

    def test_permute_must_keep_batch_first(self):
        nn = T.PivotNN("Net", [
            T.ModuleSpec("p", [T.INPUT],
                         op=T.TensorOpSpec(T.PERMUTE, {"order": (1, 0)})),
        ])
        with pytest.raises(ShapeMismatchError):
            propagate(nn, shape(4))

    def test_matmul_contraction(self):
        nn = T.PivotNN("Net", [
            T.ModuleSpec("p", [T.INPUT],
                         op=T.TensorOpSpec(T.PERMUTE, {"order": (0, 2, 1)})),
            T.ModuleSpec("m", [T.INPUT, "p"], op=T.TensorOpSpec(T.MATMUL)),
        ])
        ann = propagate(nn, shape(5, 7))
        assert ann.output_of("m") == shape(5, 5)

    def test_flatten_needs_known_dims(self):
        nn = T.PivotNN("Net", [
            T.ModuleSpec("f", [T.INPUT], layer=T.LayerSpec(T.FLATTEN, {})),
        ])
        ann = propagate(nn, shape(4, 4, 3))
        assert ann.output_of("f") == shape(48)

    def test_annotation_covers_every_module(self, corpus_pivots):
        for stem, dims, count in CORPUS:
            nn = corpus_pivots[stem]
            ann = propagate(nn, shape(*dims))
            assert ann.covers(nn)
            assert len(ann.by_module) == count


class TestOracleEquivalence:
    @pytest.mark.parametrize("stem,dims,count", CORPUS)
    def test_engine_matches_brute_force_replay(self, stem, dims, count):
        nn = fixture_pivot(stem)
        assert len(nn.modules) == count
        ann = propagate(nn, shape(*dims))
        expected = oracle_shapes(nn, dims)
        for name, want in expected.items():
            assert as_oracle(ann.output_of(name)) == want, (stem, name)

    def test_tf_tutorial_flatten_canary(self):
        nn = fixture_pivot("tf_tutorial_sequential")
        assert oracle_shapes(nn, (32, 32, 3))["flatten"] == (B, 1024)
        ann = propagate(nn, shape(32, 32, 3))
        assert ann.output_of("flatten") == shape(1024)


class TestInferMissingInputs:
    def net_without_dims(self):
        return T.PivotNN("Net", [
            conv2d("c", [T.INPUT], 8, (3, 3)),
            T.ModuleSpec("f", ["c"], layer=T.LayerSpec(T.FLATTEN, {})),
            T.ModuleSpec("d", ["f"], layer=T.LayerSpec(
                T.LINEAR, {"out_features": 10})),
        ])

    def test_fills_absent_dims(self):
        nn = self.net_without_dims()
        ann = propagate(nn, shape(6, 6, 3))
        filled = infer_missing_inputs(nn, ann)
        assert filled.module("c").layer.get("in_channels") == 3
        assert filled.module("d").layer.get("in_features") == 4 * 4 * 8

    def test_tf_tutorial_dense_after_flatten(self):
        nn = fixture_pivot("tf_tutorial_sequential")
        ann = propagate(nn, shape(32, 32, 3))
        filled = infer_missing_inputs(nn, ann)
        assert filled.module("linear").layer.get("in_features") == 1024

    def test_fixed_point_when_all_declared(self):
        nn = fixture_pivot("alexnet_pt_subclassing")
        ann = propagate(nn, shape(32, 32, 3))
        assert infer_missing_inputs(nn, ann) == nn

    def test_idempotent(self):
        nn = self.net_without_dims()
        ann = propagate(nn, shape(6, 6, 3))
        once = infer_missing_inputs(nn, ann)
        twice = infer_missing_inputs(once, ann)
        assert once == twice

    def test_conflicting_declared_dim(self):
        nn = T.PivotNN("Net", [
            T.ModuleSpec("f", [T.INPUT], layer=T.LayerSpec(T.FLATTEN, {})),
            T.ModuleSpec("d", ["f"], layer=T.LayerSpec(
                T.LINEAR, {"out_features": 10, "in_features": 512})),
        ])
        ann = propagate(nn, shape(32, 32))
        with pytest.raises(ConflictingAttributeError) as err:
            infer_missing_inputs(nn, ann)
        assert err.value.declared == 512
        assert err.value.inferred == 1024

    def test_unresolved_batch(self):
        nn = T.PivotNN("Net", [
            T.ModuleSpec("d", [T.INPUT], layer=T.LayerSpec(
                T.LINEAR, {"out_features": 4})),
        ])
        ann = propagate(nn, shape(8))
        # Rewire the annotation so the feature dim is the batch marker.
        ann.by_module["d"].inputs = [T.TensorShape((T.BATCH,))]
        with pytest.raises((UnresolvedBatchError, IndexError)):
            infer_missing_inputs(nn, ann)

    def test_deterministic(self):
        nn = self.net_without_dims()
        ann = propagate(nn, shape(6, 6, 3))
        assert propagate(nn, shape(6, 6, 3)).by_module.keys() == \
            ann.by_module.keys()
        assert infer_missing_inputs(nn, ann) == infer_missing_inputs(nn, ann)


def test_negative_dim_error_message():
    nn = T.PivotNN("Net", [
        conv2d("c", [T.INPUT], 8, (1, 1), stride=(7, 7)),
    ])
    ann = propagate(nn, shape(3, 3, 3))  # floor((3-1)/7)+1 = 1: fine
    assert ann.output_of("c") == shape(1, 1, 8)
    with pytest.raises(ShapeMismatchError):
        propagate(T.PivotNN("Net", [conv2d("c", [T.INPUT], 8, (4, 4))]),
                  shape(3, 3, 3))
