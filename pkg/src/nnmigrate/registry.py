"""Layer mapping tables between the pivot vocabulary and the two dialects.

One entry per (framework, pivot kind): the constructor to emit, the class
names recognized at extraction, the positional-parameter order, and the
keyword-to-pivot-attribute map. Values starting with ``@`` are handled
specially by the extractors (constraints, declared input shapes, wrapper
kwargs) rather than stored as attributes.

The channel-last framework is addressed as "tf", the channel-first one as
"pt" throughout.
"""

from __future__ import annotations

from .pivot import types as T

TF = "tf"
PT = "pt"
FRAMEWORKS = (TF, PT)

SEQUENTIAL = "sequential"
SUBCLASSING = "subclassing"
STYLES = (SEQUENTIAL, SUBCLASSING)

# Namespace roots that decide the framework of an import.
TF_ROOTS = ("tensorflow", "keras")
PT_ROOTS = ("torch",)


def _rule(emit, match, pos, kw, nd=None):
    return {"emit": emit, "match": match, "pos": pos, "kw": kw, "nd": nd}


# --- channel-last (keras) layer rules ---------------------------------------

def _tf_conv(n):
    return _rule(
        emit=f"layers.Conv{n}D", match=(f"Conv{n}D",),
        pos=("out_channels", "kernel"),
        kw={"filters": "out_channels", "kernel_size": "kernel",
            "strides": "stride", "padding": "padding",
            "activation": "@activation", "name": "@name",
            "input_shape": "@input_shape", "use_bias": "@use_bias_true"},
        nd=n)


def _tf_pool(n, kind):
    keras_name = "MaxPooling" if kind == "max" else "AveragePooling"
    alias = "MaxPool" if kind == "max" else "AvgPool"
    return _rule(
        emit=f"layers.{keras_name}{n}D",
        match=(f"{keras_name}{n}D", f"{alias}{n}D"),
        pos=("kernel",),
        kw={"pool_size": "kernel", "strides": "stride", "padding": "padding",
            "name": "@name", "input_shape": "@input_shape"},
        nd=n)


def _tf_rnn(name):
    kw = {"units": "hidden_size", "return_sequences": "return_sequences",
          "name": "@name", "input_shape": "@input_shape"}
    if name == "SimpleRNN":
        kw["activation"] = "@activation"
    else:
        kw["activation"] = "@fixed:tanh"
        kw["recurrent_activation"] = "@fixed:sigmoid"
    if name == "GRU":
        kw["reset_after"] = "@fixed_true"
    return _rule(emit=f"layers.{name}", match=(name,), pos=("hidden_size",), kw=kw)


TF_LAYERS = {
    T.LINEAR: _rule(
        emit="layers.Dense", match=("Dense",),
        pos=("out_features",),
        kw={"units": "out_features", "activation": "@activation",
            "name": "@name", "input_shape": "@input_shape",
            "use_bias": "@use_bias_true"}),
    T.CONV1D: _tf_conv(1),
    T.CONV2D: _tf_conv(2),
    T.CONV3D: _tf_conv(3),
    T.MAXPOOL1D: _tf_pool(1, "max"),
    T.MAXPOOL2D: _tf_pool(2, "max"),
    T.MAXPOOL3D: _tf_pool(3, "max"),
    T.AVGPOOL1D: _tf_pool(1, "avg"),
    T.AVGPOOL2D: _tf_pool(2, "avg"),
    T.AVGPOOL3D: _tf_pool(3, "avg"),
    T.FLATTEN: _rule(
        emit="layers.Flatten", match=("Flatten",), pos=(),
        kw={"name": "@name", "input_shape": "@input_shape"}),
    T.DROPOUT: _rule(
        emit="layers.Dropout", match=("Dropout",), pos=("rate",),
        kw={"rate": "rate", "name": "@name", "input_shape": "@input_shape"}),
    T.EMBEDDING: _rule(
        emit="layers.Embedding", match=("Embedding",),
        pos=("vocab_size", "embedding_dim"),
        kw={"input_dim": "vocab_size", "output_dim": "embedding_dim",
            "name": "@name", "input_shape": "@input_shape"}),
    T.SIMPLERNN: _tf_rnn("SimpleRNN"),
    T.LSTM: _tf_rnn("LSTM"),
    T.GRU: _tf_rnn("GRU"),
}

# --- channel-first (torch.nn) layer rules -----------------------------------

def _pt_conv(n):
    return _rule(
        emit=f"nn.Conv{n}d", match=(f"Conv{n}d",),
        pos=("in_channels", "out_channels", "kernel"),
        kw={"in_channels": "in_channels", "out_channels": "out_channels",
            "kernel_size": "kernel", "stride": "stride", "padding": "padding",
            "bias": "@use_bias_true", "dilation": "@fixed_one",
            "groups": "@fixed_one"},
        nd=n)


def _pt_pool(n, kind):
    cls = "MaxPool" if kind == "max" else "AvgPool"
    kw = {"kernel_size": "kernel", "stride": "stride", "padding": "padding"}
    if kind == "max":
        kw["dilation"] = "@fixed_one"
        kw["ceil_mode"] = "@fixed_false"
    else:
        kw["count_include_pad"] = "@count_include_pad"
        kw["ceil_mode"] = "@fixed_false"
    return _rule(emit=f"nn.{cls}{n}d", match=(f"{cls}{n}d",), pos=("kernel",),
                 kw=kw, nd=n)


def _pt_rnn(name):
    kw = {"input_size": "input_size", "hidden_size": "hidden_size",
          "batch_first": "@batch_first_true", "bidirectional": "bidirectional",
          "num_layers": "@fixed_one", "bias": "@use_bias_true",
          "dropout": "@fixed_zero"}
    if name == "RNN":
        kw["nonlinearity"] = "@nonlinearity"
    return _rule(emit=f"nn.{name}", match=(name,),
                 pos=("input_size", "hidden_size"), kw=kw)


PT_LAYERS = {
    T.LINEAR: _rule(
        emit="nn.Linear", match=("Linear",),
        pos=("in_features", "out_features"),
        kw={"in_features": "in_features", "out_features": "out_features",
            "bias": "@use_bias_true"}),
    T.CONV1D: _pt_conv(1),
    T.CONV2D: _pt_conv(2),
    T.CONV3D: _pt_conv(3),
    T.MAXPOOL1D: _pt_pool(1, "max"),
    T.MAXPOOL2D: _pt_pool(2, "max"),
    T.MAXPOOL3D: _pt_pool(3, "max"),
    T.AVGPOOL1D: _pt_pool(1, "avg"),
    T.AVGPOOL2D: _pt_pool(2, "avg"),
    T.AVGPOOL3D: _pt_pool(3, "avg"),
    T.FLATTEN: _rule(
        emit="nn.Flatten", match=("Flatten",), pos=(),
        kw={"start_dim": "@fixed_one", "end_dim": "@fixed_minus_one"}),
    T.DROPOUT: _rule(
        emit="nn.Dropout", match=("Dropout",), pos=("rate",),
        kw={"p": "rate", "inplace": "@fixed_false"}),
    T.EMBEDDING: _rule(
        emit="nn.Embedding", match=("Embedding",),
        pos=("vocab_size", "embedding_dim"),
        kw={"num_embeddings": "vocab_size", "embedding_dim": "embedding_dim"}),
    T.SIMPLERNN: _pt_rnn("RNN"),
    T.LSTM: _pt_rnn("LSTM"),
    T.GRU: _pt_rnn("GRU"),
}

LAYER_TABLES = {TF: TF_LAYERS, PT: PT_LAYERS}

# Class-name suffix -> pivot kind, per framework.
MATCH_TABLES = {
    fw: {alias: kind for kind, rule in table.items() for alias in rule["match"]}
    for fw, table in LAYER_TABLES.items()
}

# --- activations -------------------------------------------------------------

# torch.nn activation module <-> pivot literal name
PT_ACTIVATION_CLASSES = {
    "ReLU": "relu",
    "Sigmoid": "sigmoid",
    "Tanh": "tanh",
    "Softmax": "softmax",
    "LeakyReLU": "leaky_relu",
}
PT_ACTIVATION_EMIT = {v: k for k, v in PT_ACTIVATION_CLASSES.items()}

# keras standalone activation layers foldable into the preceding layer
TF_ACTIVATION_CLASSES = {
    "ReLU": "relu",
    "Softmax": "softmax",
    "LeakyReLU": "leaky_relu",
}

# --- tensor ops ---------------------------------------------------------------

# pivot op -> (tf callee, pt callee); permute is a method call on the pt side.
TENSOR_OP_EMIT = {
    T.CONCATENATE: ("tf.concat", "torch.cat"),
    T.RESHAPE: ("tf.reshape", "torch.reshape"),
    T.ADD: ("tf.add", "torch.add"),
    T.MULTIPLY: ("tf.multiply", "torch.mul"),
    T.MATMUL: ("tf.matmul", "torch.matmul"),
    T.TRANSPOSE: ("tf.transpose", "torch.transpose"),
    T.PERMUTE: ("tf.transpose", ".permute"),
}

# --- training configuration ---------------------------------------------------

TF_OPTIMIZERS = {
    "sgd": "keras.optimizers.SGD",
    "adam": "keras.optimizers.Adam",
    "adamw": "keras.optimizers.AdamW",
    "rmsprop": "keras.optimizers.RMSprop",
}
PT_OPTIMIZERS = {
    "sgd": "torch.optim.SGD",
    "adam": "torch.optim.Adam",
    "adamw": "torch.optim.AdamW",
    "rmsprop": "torch.optim.RMSprop",
}
TF_LOSSES = {
    "crossentropy": "keras.losses.SparseCategoricalCrossentropy",
    "binary_crossentropy": "keras.losses.BinaryCrossentropy",
    "mse": "keras.losses.MeanSquaredError",
}
PT_LOSSES = {
    "crossentropy": "nn.CrossEntropyLoss",
    "binary_crossentropy": "nn.BCELoss",
    "mse": "nn.MSELoss",
}
# Accepted loss spellings at extraction (strings and class names).
TF_LOSS_ALIASES = {
    "SparseCategoricalCrossentropy": "crossentropy",
    "CategoricalCrossentropy": "crossentropy",
    "sparse_categorical_crossentropy": "crossentropy",
    "categorical_crossentropy": "crossentropy",
    "BinaryCrossentropy": "binary_crossentropy",
    "binary_crossentropy": "binary_crossentropy",
    "MeanSquaredError": "mse",
    "mse": "mse",
    "mean_squared_error": "mse",
}
PT_LOSS_ALIASES = {
    "CrossEntropyLoss": "crossentropy",
    "NLLLoss": "crossentropy",
    "BCELoss": "binary_crossentropy",
    "BCEWithLogitsLoss": "binary_crossentropy",
    "MSELoss": "mse",
}
OPTIMIZER_ALIASES = {
    "SGD": "sgd", "sgd": "sgd",
    "Adam": "adam", "adam": "adam",
    "AdamW": "adamw", "adamw": "adamw",
    "RMSprop": "rmsprop", "rmsprop": "rmsprop",
}

# Dataset constructs the extractors recognize by name.
KNOWN_DATASETS = {
    "cifar10": ("classification", "images"),
    "cifar100": ("classification", "images"),
    "mnist": ("classification", "images"),
    "fashion_mnist": ("classification", "images"),
    "svhn": ("classification", "images"),
    "imdb": ("classification", "sequences"),
    "sst2": ("classification", "sequences"),
}


def permute_orders(rank: int) -> tuple:
    """Channel-last -> channel-first adapter order and its inverse for a
    given tensor rank (batch dim included)."""
    to_first = (0, rank - 1) + tuple(range(1, rank - 1))
    to_last = (0,) + tuple(range(2, rank)) + (1,)
    return to_first, to_last
