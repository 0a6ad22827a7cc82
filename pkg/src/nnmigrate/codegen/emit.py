"""Target-dialect code generation from an emission plan.

Four generators (two frameworks x two styles) render Jinja templates from a
preprocessed context: constructor expressions, forward-pass lines and the
training scaffold are prepared here so the templates stay declarative.
Output is byte-deterministic for equal inputs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from jinja2 import Environment, PackageLoader

from .. import registry as R
from ..diagnostics import (
    MissingInputDimsError, NonChainForSequentialError, SamePaddingStrideError,
    UnsupportedPaddingError,
)
from ..pivot import types as T
from ..pivot.serialize import serialize
from .plan import GenPlan

TOOL_VERSION = "0.1.0"

_env = Environment(
    loader=PackageLoader("nnmigrate.codegen", "templates"),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


@dataclass(frozen=True)
class EmitTarget:
    framework: str  # "tf" | "pt"
    style: str      # "sequential" | "subclassing"

    def __post_init__(self):
        assert self.framework in R.FRAMEWORKS and self.style in R.STYLES


def emit(plan: GenPlan, nn: T.PivotNN, target: EmitTarget,
         source_dialect=None, emit_training: bool | None = None) -> str:
    """Render the migrated source text for one target dialect."""
    _preflight(nn, target)
    if target.style == R.SEQUENTIAL:
        _require_chain(nn)

    include_training = (emit_training if emit_training is not None
                        else nn.config is not None)

    context = {
        "header": _header(nn, target, source_dialect),
        "symbol_lines": [f"{name} = {source}" for name, source in nn.symbols],
        "dataset_lines": _dataset_lines(nn) if include_training else [],
        "training_lines": (_training_lines(nn, target)
                           if include_training and nn.config is not None else []),
    }

    if target.framework == R.TF:
        if target.style == R.SEQUENTIAL:
            context.update(_tf_sequential_context(plan, nn))
            template = "tf_sequential.py.j2"
        else:
            context.update(_tf_subclassing_context(plan, nn))
            template = "tf_subclassing.py.j2"
    else:
        if target.style == R.SEQUENTIAL:
            context.update(_pt_sequential_context(plan, nn))
            template = "pt_sequential.py.j2"
        else:
            context.update(_pt_subclassing_context(plan, nn))
            template = "pt_subclassing.py.j2"

    return _env.get_template(template).render(**context)


# --- preconditions ------------------------------------------------------------

def _all_layers(nn):
    for m in nn.modules:
        if m.layer is not None:
            yield m
    for sub in nn.subnets:
        yield from _all_layers(sub)


def _preflight(nn, target):
    if target.framework == R.PT:
        missing = [m.name for m in _all_layers(nn)
                   if m.layer.kind in T.INPUT_DIM_ATTR
                   and m.layer.get(T.INPUT_DIM_ATTR[m.layer.kind]) is None]
        if missing:
            raise MissingInputDimsError(
                "channel-first emission requires input dimensions for: "
                + ", ".join(missing))
        for m in _all_layers(nn):
            padding = m.layer.get("padding")
            stride = m.layer.get("stride", ())
            if padding == T.PADDING_SAME and any(s > 1 for s in stride):
                raise SamePaddingStrideError(
                    "padding='same' with stride > 1 cannot be reproduced "
                    "exactly in the channel-first dialect", module=m.name)
            if (padding == T.PADDING_SAME and m.layer.kind in T.POOL_KINDS
                    and any(k % 2 == 0 for k in m.layer.get("kernel", ()))):
                raise UnsupportedPaddingError(
                    "same-padded pooling with an even kernel has no exact "
                    "channel-first equivalent", module=m.name)
    else:
        for m in _all_layers(nn):
            if (m.layer.kind in T.POOL_KINDS
                    and isinstance(m.layer.get("padding"), int)
                    and m.layer.get("padding") > 0):
                raise UnsupportedPaddingError(
                    "explicitly padded pooling has no exact channel-last "
                    "equivalent", module=m.name)


def _require_chain(nn):
    prev = None
    for m in nn.modules:
        if m.layer is None:
            raise NonChainForSequentialError(
                f"module '{m.name}' is not a layer; use a subclassing target",
                module=m.name)
        if m.layer.kind in T.RNN_KINDS:
            raise NonChainForSequentialError(
                f"recurrent module '{m.name}' needs forward-pass dataflow; "
                "use a subclassing target", module=m.name)
        expected = (T.INPUT,) if prev is None else (prev,)
        if m.inputs != expected:
            raise NonChainForSequentialError(
                f"module '{m.name}' does not consume the previous module; "
                "use a subclassing target", module=m.name)
        prev = m.name


# --- shared rendering ----------------------------------------------------------

def _header(nn, target, source_dialect):
    src = (f"{source_dialect.framework}/{source_dialect.style}"
           if source_dialect is not None else "pivot")
    digest = hashlib.sha256(serialize(nn)).hexdigest()[:16]
    return (f"# Generated by nnmigrate {TOOL_VERSION}\n"
            f"# source dialect: {src} -> target: "
            f"{target.framework}/{target.style}\n"
            f"# pivot sha256: {digest}")


def _fmt(value):
    if isinstance(value, tuple):
        inner = ", ".join(_fmt(v) for v in value)
        return f"({inner},)" if len(value) == 1 else f"({inner})"
    if isinstance(value, str):
        return f"'{value}'"
    return repr(value)


def _int_list(values):
    return ", ".join(str(v) for v in values)


def _input_dims(nn):
    if nn.input_shape is None:
        return None
    return tuple(d for d in nn.input_shape.dims if d is not T.BATCH)


def _dataset_lines(nn):
    if not nn.datasets:
        return []
    lines = ["DATASETS = ["]
    for d in nn.datasets:
        lines.append(
            f"    {{'name': '{d.name}', 'path': '{d.path}', "
            f"'task': '{d.task}', 'input_format': '{d.input_format}'}},")
    lines.append("]")
    return lines


def _terminal_has_no_activation(nn):
    last = nn.modules[-1]
    return last.layer is None or last.layer.activation.is_none


# --- channel-last (keras) ------------------------------------------------------

def _tf_activation_kwarg(act):
    if act.kind == "literal":
        return f"activation='{act.name}'"
    if act.kind == "dynamic":
        return f"activation={act.name}"
    return None


def _tf_layer_expr(spec: T.LayerSpec, name: str | None = None) -> str:
    kind = spec.kind
    args = []
    if kind == T.LINEAR:
        args.append(_fmt(spec.get("out_features")))
    elif kind in T.CONV_KINDS:
        args.append(_fmt(spec.get("out_channels")))
        args.append(f"kernel_size={_fmt(spec.get('kernel'))}")
        args.append(f"strides={_fmt(spec.get('stride'))}")
        if spec.get("padding") == T.PADDING_SAME:
            args.append("padding='same'")
    elif kind in T.POOL_KINDS:
        args.append(f"pool_size={_fmt(spec.get('kernel'))}")
        args.append(f"strides={_fmt(spec.get('stride'))}")
        if spec.get("padding") == T.PADDING_SAME:
            args.append("padding='same'")
    elif kind == T.DROPOUT:
        args.append(_fmt(spec.get("rate")))
    elif kind == T.EMBEDDING:
        args.append(_fmt(spec.get("vocab_size")))
        args.append(_fmt(spec.get("embedding_dim")))
    elif kind in T.RNN_KINDS:
        args.append(_fmt(spec.get("hidden_size")))
        if spec.get("return_sequences"):
            args.append("return_sequences=True")
        if kind == T.SIMPLERNN and spec.activation.kind == "literal" \
                and spec.activation.name != "tanh":
            args.append(f"activation='{spec.activation.name}'")
        if kind == T.SIMPLERNN and spec.activation.kind == "dynamic":
            args.append(f"activation={spec.activation.name}")

    if kind not in T.RNN_KINDS and kind in (T.LINEAR,) + T.CONV_KINDS:
        act = _tf_activation_kwarg(spec.activation)
        if act:
            args.append(act)

    expr = f"{R.TF_LAYERS[kind]['emit']}({', '.join(args)})"
    if spec.get("bidirectional"):
        expr = f"layers.Bidirectional({expr})"
    if name is not None:
        # the name keyword rides on the outermost layer object
        base, tail = expr[:-1], ")"
        sep = ", " if not base.endswith("(") else ""
        expr = f"{base}{sep}name='{name}'{tail}"
    return expr


def _tf_op_expr(op: T.TensorOpSpec, in_vars) -> str:
    kind = op.kind
    if kind == T.CONCATENATE:
        return f"tf.concat([{', '.join(in_vars)}], axis={op.params['axis']})"
    if kind == T.RESHAPE:
        return f"tf.reshape({in_vars[0]}, {_fmt((-1,) + op.params['shape'])})"
    if kind == T.PERMUTE:
        return (f"tf.transpose({in_vars[0]}, "
                f"perm=[{_int_list(op.params['order'])}])")
    if kind == T.TRANSPOSE:
        return (f"keras.ops.swapaxes({in_vars[0]}, {op.params['dim0']}, "
                f"{op.params['dim1']})")
    if kind == T.ADD:
        return f"tf.add({in_vars[0]}, {in_vars[1]})"
    if kind == T.MULTIPLY:
        return f"tf.multiply({in_vars[0]}, {in_vars[1]})"
    if kind == T.MATMUL:
        return f"tf.matmul({in_vars[0]}, {in_vars[1]})"
    raise ValueError(f"unknown op kind {kind}")


def _tf_sequential_context(plan: GenPlan, nn):
    entries = []
    dims = _input_dims(nn)
    if dims is not None:
        entries.append(f"keras.Input(shape={_fmt(dims)})")
    for rec in plan.records:
        spec = rec.module.layer
        padding = spec.get("padding")
        if isinstance(padding, int) and padding > 0:
            nd = T.SPATIAL_RANK[spec.kind]
            entries.append(f"layers.ZeroPadding{nd}D(padding={padding}, "
                           f"name='{rec.emitted_name}_pad')")
            spec = spec.with_attrs(padding=T.PADDING_VALID)
        entries.append(_tf_layer_expr(spec, name=rec.emitted_name))
    return {"entries": entries, "name": nn.name}


def _class_context(plan, nn, framework, class_name=None):
    builder = (_TfBody if framework == R.TF else _PtBody)(plan, nn)
    return {
        "class_name": class_name or nn.name,
        "input_var": plan.input_var,
        "init_lines": builder.init_lines(),
        "body_lines": builder.body_lines(),
        "return_var": builder.return_var(),
    }


def _subnet_classes(plan, nn, framework):
    """Nested model classes, innermost first."""
    classes = []
    seen = set()

    def visit(p, net):
        for rec in p.records:
            if rec.sub_plan is not None and rec.module.subnn not in seen:
                seen.add(rec.module.subnn)
                sub = net.subnet(rec.module.subnn)
                visit(rec.sub_plan, sub)
                classes.append(_class_context(rec.sub_plan, sub, framework,
                                              class_name=sub.name))

    visit(plan, nn)
    return classes


def _instance_line(nn):
    var = "model" if nn.name != "model" else "model_instance"
    return f"{var} = {nn.name}()"


def _tf_subclassing_context(plan, nn):
    constant_lines = []
    dims = _input_dims(nn)
    if dims is not None:
        constant_lines.append(f"INPUT_SHAPE = {_fmt(dims)}")
    classes = _subnet_classes(plan, nn, R.TF)
    classes.append(_class_context(plan, nn, R.TF))
    return {
        "constant_lines": constant_lines,
        "classes": classes,
        "instance_line": _instance_line(nn),
    }


class _TfBody:
    def __init__(self, plan, nn):
        self.plan = plan
        self.nn = nn
        self._init = []
        self._body = []
        self._env = {T.INPUT: plan.input_var}
        self._build()

    def init_lines(self):
        return self._init

    def body_lines(self):
        return self._body

    def return_var(self):
        return self._env[self.plan.output_record().module.name]

    def _build(self):
        for rec in self.plan.records:
            m = rec.module
            in_vars = [self._env[src] for src in m.inputs]
            if m.layer is not None:
                self._layer(rec, in_vars)
            elif m.op is not None:
                self._body.append(
                    f"{rec.output_var} = {_tf_op_expr(m.op, in_vars)}")
                self._env[m.name] = rec.output_var
            else:
                self._init.append(f"self.{rec.emitted_name} = {m.subnn}()")
                self._body.append(
                    f"{rec.output_var} = self.{rec.emitted_name}({in_vars[0]})")
                self._env[m.name] = rec.output_var

    def _layer(self, rec, in_vars):
        spec = rec.module.layer
        cur = in_vars[0]
        padding = spec.get("padding")
        if isinstance(padding, int) and padding > 0:
            nd = T.SPATIAL_RANK[spec.kind]
            self._init.append(
                f"self.{rec.emitted_name}_pad = "
                f"layers.ZeroPadding{nd}D(padding={padding})")
            self._body.append(
                f"{rec.output_var}_padded = self.{rec.emitted_name}_pad({cur})")
            cur = f"{rec.output_var}_padded"
            spec = spec.with_attrs(padding=T.PADDING_VALID)
        self._init.append(f"self.{rec.emitted_name} = {_tf_layer_expr(spec)}")
        self._body.append(f"{rec.output_var} = self.{rec.emitted_name}({cur})")
        self._env[rec.module.name] = rec.output_var


# --- channel-first (torch) ------------------------------------------------------

def _pt_layer_expr(spec: T.LayerSpec) -> str:
    kind = spec.kind
    args = []
    if kind == T.LINEAR:
        args.append(_fmt(spec.get("in_features")))
        args.append(_fmt(spec.get("out_features")))
    elif kind in T.CONV_KINDS:
        args.append(_fmt(spec.get("in_channels")))
        args.append(_fmt(spec.get("out_channels")))
        args.append(f"kernel_size={_fmt(spec.get('kernel'))}")
        args.append(f"stride={_fmt(spec.get('stride'))}")
        padding = spec.get("padding")
        if padding == T.PADDING_SAME:
            args.append("padding='same'")
        elif isinstance(padding, int) and padding > 0:
            args.append(f"padding={padding}")
    elif kind in T.POOL_KINDS:
        args.append(f"kernel_size={_fmt(spec.get('kernel'))}")
        args.append(f"stride={_fmt(spec.get('stride'))}")
        padding = spec.get("padding")
        if padding == T.PADDING_SAME:
            pads = tuple(k // 2 for k in spec.get("kernel"))
            args.append(f"padding={_fmt(pads) if len(pads) > 1 else pads[0]}")
            if kind in T.AVGPOOL_KINDS:
                args.append("count_include_pad=False")
        elif isinstance(padding, int) and padding > 0:
            args.append(f"padding={padding}")
    elif kind == T.DROPOUT:
        args.append(_fmt(spec.get("rate")))
    elif kind == T.EMBEDDING:
        args.append(_fmt(spec.get("vocab_size")))
        args.append(_fmt(spec.get("embedding_dim")))
    elif kind in T.RNN_KINDS:
        args.append(_fmt(spec.get("input_size")))
        args.append(_fmt(spec.get("hidden_size")))
        args.append("batch_first=True")
        if spec.get("bidirectional"):
            args.append("bidirectional=True")
        if kind == T.SIMPLERNN:
            if spec.activation.kind == "literal" and spec.activation.name == "relu":
                args.append("nonlinearity='relu'")
            elif spec.activation.kind == "dynamic":
                args.append(f"nonlinearity={spec.activation.name}")
    return f"{R.PT_LAYERS[kind]['emit']}({', '.join(args)})"


def _pt_activation_expr(act: T.ActivationRef, channel_first_region: bool) -> str:
    if act.kind == "dynamic":
        return f"resolve_activation({act.name})"
    name = act.name
    if name == "softmax":
        return f"nn.Softmax(dim={1 if channel_first_region else -1})"
    return f"nn.{R.PT_ACTIVATION_EMIT[name]}()"


def _pt_op_expr(op: T.TensorOpSpec, in_vars) -> str:
    kind = op.kind
    if kind == T.CONCATENATE:
        return f"torch.cat([{', '.join(in_vars)}], dim={op.params['axis']})"
    if kind == T.RESHAPE:
        return f"torch.reshape({in_vars[0]}, {_fmt((-1,) + op.params['shape'])})"
    if kind == T.PERMUTE:
        return f"{in_vars[0]}.permute({_int_list(op.params['order'])})"
    if kind == T.TRANSPOSE:
        return (f"torch.transpose({in_vars[0]}, {op.params['dim0']}, "
                f"{op.params['dim1']})")
    if kind == T.ADD:
        return f"torch.add({in_vars[0]}, {in_vars[1]})"
    if kind == T.MULTIPLY:
        return f"torch.mul({in_vars[0]}, {in_vars[1]})"
    if kind == T.MATMUL:
        return f"torch.matmul({in_vars[0]}, {in_vars[1]})"
    raise ValueError(f"unknown op kind {kind}")


def _needs_resolver(nn):
    for m in _all_layers(nn):
        if m.layer.activation.kind == "dynamic" and m.layer.kind != T.SIMPLERNN:
            return True
    return False


def _pt_sequential_context(plan: GenPlan, nn):
    entries = []
    keys = set()

    def push(key, expr):
        unique = key
        serial = 1
        while unique in keys:
            serial += 1
            unique = f"{key}_{serial}"
        keys.add(unique)
        entries.append((unique, expr))

    needs_permute = False
    for rec in plan.records:
        for op in rec.pre_ops:
            push(f"{rec.emitted_name}_pre",
                 f"Permute({_int_list(op.params['order'])})")
            needs_permute = True
        push(rec.emitted_name, _pt_layer_expr(rec.module.layer))
        act = rec.module.layer.activation
        if not act.is_none and rec.module.layer.kind != T.SIMPLERNN:
            push(f"{rec.emitted_name}_act",
                 _pt_activation_expr(act, rec.in_channel_first_region))
        for op in rec.post_ops:
            push(f"{rec.emitted_name}_post",
                 f"Permute({_int_list(op.params['order'])})")
            needs_permute = True

    constant_lines = [f"MODEL_NAME = '{nn.name}'"]
    dims = _input_dims(nn)
    if dims is not None:
        constant_lines.append(f"INPUT_SHAPE = {_fmt(dims)}")
    return {
        "entries": entries,
        "constant_lines": constant_lines,
        "needs_resolver": _needs_resolver(nn),
        "needs_permute": needs_permute,
    }


def _pt_subclassing_context(plan, nn):
    constant_lines = []
    dims = _input_dims(nn)
    if dims is not None:
        constant_lines.append(f"INPUT_SHAPE = {_fmt(dims)}")
    classes = _subnet_classes(plan, nn, R.PT)
    classes.append(_class_context(plan, nn, R.PT))
    return {
        "constant_lines": constant_lines,
        "classes": classes,
        "instance_line": _instance_line(nn),
        "needs_resolver": _needs_resolver(nn),
    }


class _PtBody:
    def __init__(self, plan, nn):
        self.plan = plan
        self.nn = nn
        self._init = []
        self._body = []
        self._env = {T.INPUT: plan.input_var}
        self._build()

    def init_lines(self):
        return self._init

    def body_lines(self):
        return self._body

    def return_var(self):
        return self._env[self.plan.output_record().module.name]

    def _build(self):
        for rec in self.plan.records:
            m = rec.module
            cur = [self._env[src] for src in m.inputs]
            for op in rec.pre_ops:
                pre_var = f"{rec.output_var}_pre"
                self._body.append(f"{pre_var} = {_pt_op_expr(op, cur)}")
                cur = [pre_var]
            if m.layer is not None:
                out = self._layer(rec, cur[0])
            elif m.op is not None:
                out = rec.output_var
                self._body.append(f"{out} = {_pt_op_expr(m.op, cur)}")
            else:
                self._init.append(f"self.{rec.emitted_name} = {m.subnn}()")
                out = rec.output_var
                self._body.append(f"{out} = self.{rec.emitted_name}({cur[0]})")
            for op in rec.post_ops:
                post_var = f"{rec.output_var}_post"
                self._body.append(f"{post_var} = {_pt_op_expr(op, [out])}")
                out = post_var
            self._env[m.name] = out

    def _layer(self, rec, in_var):
        spec = rec.module.layer
        name = rec.emitted_name
        out = rec.output_var
        self._init.append(f"self.{name} = {_pt_layer_expr(spec)}")
        if spec.kind in T.RNN_KINDS:
            self._body.append(f"{out}, _ = self.{name}({in_var})")
            if not spec.get("return_sequences"):
                self._body.append(f"{out} = {out}[:, -1, :]")
            return out
        self._body.append(f"{out} = self.{name}({in_var})")
        act = spec.activation
        if not act.is_none and spec.kind != T.SIMPLERNN:
            expr = _pt_activation_expr(act, rec.in_channel_first_region)
            if act.kind == "dynamic":
                self._body.append(f"{out} = {expr}({out})")
            else:
                self._init.append(f"self.{name}_act = {expr}")
                self._body.append(f"{out} = self.{name}_act({out})")
        return out


# --- training scaffold -----------------------------------------------------------

def _training_lines(nn, target):
    cfg = nn.config
    if target.framework == R.TF:
        return _tf_training(cfg, nn)
    return _pt_training(cfg)


def _tf_training(cfg, nn):
    optimizer = (f"{R.TF_OPTIMIZERS[cfg.optimizer]}"
                 f"(learning_rate={cfg.learning_rate})")
    from_logits = "True" if _terminal_has_no_activation(nn) else "False"
    loss = f"{R.TF_LOSSES[cfg.loss]}(from_logits={from_logits})"
    if cfg.loss == "mse":
        loss = f"{R.TF_LOSSES[cfg.loss]}()"
    metric_items = []
    for metric in cfg.metrics:
        if metric == "accuracy":
            metric_items.append("'accuracy'")
        else:
            metric_items.append("keras.metrics.F1Score()")
    lines = [
        "model.compile(",
        f"    optimizer={optimizer},",
        f"    loss={loss},",
    ]
    if metric_items:
        lines.append(f"    metrics=[{', '.join(metric_items)}],")
    lines.append(")")
    lines.extend([
        "",
        f"EPOCHS = {cfg.epochs}",
        f"BATCH_SIZE = {cfg.batch_size}",
        "",
        "",
        "def train(train_data, train_labels, validation_data=None):",
        "    return model.fit(train_data, train_labels, epochs=EPOCHS,",
        "                     batch_size=BATCH_SIZE, "
        "validation_data=validation_data)",
        "",
        "",
        "def evaluate(test_data, test_labels):",
        "    return model.evaluate(test_data, test_labels, "
        "batch_size=BATCH_SIZE)",
    ])
    return lines


def _pt_training(cfg):
    return [
        f"criterion = {R.PT_LOSSES[cfg.loss]}()",
        f"optimizer = {R.PT_OPTIMIZERS[cfg.optimizer]}"
        f"(model.parameters(), lr={cfg.learning_rate})",
        f"EPOCHS = {cfg.epochs}",
        f"BATCH_SIZE = {cfg.batch_size}",
        f"METRICS = [{', '.join(repr(m) for m in cfg.metrics)}]",
        "",
        "",
        "def train(train_loader):",
        "    model.train()",
        "    for _ in range(EPOCHS):",
        "        for inputs, targets in train_loader:",
        "            optimizer.zero_grad()",
        "            loss = criterion(model(inputs), targets)",
        "            loss.backward()",
        "            optimizer.step()",
        "",
        "",
        "def evaluate(test_loader):",
        "    model.eval()",
        "    correct = 0",
        "    total = 0",
        "    with torch.no_grad():",
        "        for inputs, targets in test_loader:",
        "            outputs = model(inputs)",
        "            predictions = outputs.argmax(dim=1)",
        "            correct += (predictions == targets).sum().item()",
        "            total += targets.numel()",
        "    return correct / max(total, 1)",
    ]
