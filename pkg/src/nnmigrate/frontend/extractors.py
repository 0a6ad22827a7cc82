"""The four dialect extractors (two frameworks x two architecture styles).

Subclassing extraction walks the constructor for module declarations and
recovers the graph from the forward method's def/use chains (fan-out and
joins included). Sequential extraction walks the container construction.
Both lean on the shared binding tables and the collector's post-passes.
"""

from __future__ import annotations

import ast

from .. import registry as R
from ..diagnostics import (
    RecursionDepthError, UnresolvedDataflowError, UnsupportedConstructError,
    UnsupportedLayerError,
)
from ..pivot import types as T
from .binding import bind_layer_call, const_arg, resolve_activation_value
from .collect import Collector
from .common import (
    ModelClassInfo, SequentialInfo, SourceInfo, matches_suffix, resolve_dotted,
)
from .parse import node_span
from .symbols import Scope, build_scope

MAX_SUBNN_DEPTH = 8

# Functional activation callables foldable into the producing layer.
_FUNC_ACTIVATIONS = {
    R.PT: {
        "torch.relu": "relu", "torch.sigmoid": "sigmoid", "torch.tanh": "tanh",
        "torch.nn.functional.relu": "relu",
        "torch.nn.functional.sigmoid": "sigmoid",
        "torch.nn.functional.tanh": "tanh",
        "torch.nn.functional.softmax": "softmax",
        "torch.nn.functional.leaky_relu": "leaky_relu",
    },
    R.TF: {
        "tensorflow.nn.relu": "relu", "tensorflow.nn.sigmoid": "sigmoid",
        "tensorflow.nn.tanh": "tanh", "tensorflow.nn.softmax": "softmax",
        "tensorflow.nn.leaky_relu": "leaky_relu",
    },
}

# Free-function tensor ops; "@flatten" becomes a Flatten layer module.
_OP_CALLS = {
    R.PT: {
        "torch.cat": T.CONCATENATE, "torch.concat": T.CONCATENATE,
        "torch.reshape": T.RESHAPE, "torch.add": T.ADD,
        "torch.mul": T.MULTIPLY, "torch.multiply": T.MULTIPLY,
        "torch.matmul": T.MATMUL, "torch.transpose": T.TRANSPOSE,
        "torch.permute": T.PERMUTE, "torch.flatten": "@flatten",
    },
    R.TF: {
        "tensorflow.concat": T.CONCATENATE, "tensorflow.reshape": T.RESHAPE,
        "tensorflow.add": T.ADD, "tensorflow.multiply": T.MULTIPLY,
        "tensorflow.matmul": T.MATMUL, "tensorflow.transpose": "@tf_transpose",
        "keras.ops.swapaxes": T.TRANSPOSE,
        "tensorflow.keras.ops.swapaxes": T.TRANSPOSE,
    },
}

_AXIS_KW = {R.PT: "dim", R.TF: "axis"}


def _span(node):
    return node_span(node)


def _err_dataflow(message, node):
    span = _span(node) or (None, None)
    return UnresolvedDataflowError(message, line=span[0], column=span[1])


def _err_layer(message, node):
    span = _span(node) or (None, None)
    return UnsupportedLayerError(message, line=span[0], column=span[1])


def _err_construct(message, node):
    span = _span(node) or (None, None)
    return UnsupportedConstructError(message, line=span[0], column=span[1])


def _is_docstring(stmt) -> bool:
    return (isinstance(stmt, ast.Expr) and isinstance(stmt.value, ast.Constant)
            and isinstance(stmt.value.value, str))


def _last_step_slice(node: ast.Subscript) -> bool:
    """Matches the ``x[:, -1, :]`` final-time-step selection idiom."""
    s = node.slice
    if not isinstance(s, ast.Tuple) or len(s.elts) != 3:
        return False
    first, idx, last = s.elts
    full = (lambda e: isinstance(e, ast.Slice)
            and e.lower is None and e.upper is None and e.step is None)
    if not (full(first) and full(last)):
        return False
    if isinstance(idx, ast.UnaryOp) and isinstance(idx.op, ast.USub):
        idx = idx.operand
        return isinstance(idx, ast.Constant) and idx.value == 1
    return isinstance(idx, ast.Constant) and idx.value == -1


def _classify_activation_class(path, call, framework, scope):
    """ActivationRef for a standalone activation layer construction."""
    if path is None:
        return None
    name = path.rsplit(".", 1)[-1]
    table = (R.PT_ACTIVATION_CLASSES if framework == R.PT
             else R.TF_ACTIVATION_CLASSES)
    if framework == R.PT and not matches_suffix(path, tuple(
            f"torch.nn.{cls}" for cls in R.PT_ACTIVATION_CLASSES)):
        return None
    if framework == R.TF:
        if matches_suffix(path, ("keras.layers.Activation",)):
            if len(call.args) != 1:
                raise _err_layer("Activation layer needs one argument", call)
            return resolve_activation_value(call.args[0], scope, call)
        if not matches_suffix(path, tuple(
                f"keras.layers.{cls}" for cls in R.TF_ACTIVATION_CLASSES)):
            return None
    if name not in table:
        return None
    # Parameterized activations (explicit slopes) have no pivot carrier;
    # Softmax axis is layout-dependent and re-derived at emission.
    for kw in call.keywords:
        if kw.arg != "dim" and kw.arg != "axis":
            raise _err_layer(f"parameterized activation '{name}' is unsupported",
                             call)
    if call.args and name != "Softmax":
        raise _err_layer(f"parameterized activation '{name}' is unsupported", call)
    return T.ActivationRef.literal(table[name])


def _zero_padding(path, call, framework, scope):
    """(padding, nd) for a ZeroPaddingND construction, else None."""
    if framework != R.TF or path is None:
        return None
    name = path.rsplit(".", 1)[-1]
    if not (name.startswith("ZeroPadding") and
            matches_suffix(path, (f"keras.layers.{name}",))):
        return None
    nd = int(name[-2])
    if call.args:
        raw = const_arg(call.args[0], scope, call, "padding")
    else:
        raw = None
        for kw in call.keywords:
            if kw.arg == "padding":
                raw = const_arg(kw.value, scope, call, "padding")
            elif kw.arg != "name":
                raise _err_layer(f"unsupported keyword '{kw.arg}' on {name}", call)
        if raw is None:
            raw = 1
    pad = _symmetric_padding(raw, call)
    return pad, nd


def _symmetric_padding(raw, node):
    if isinstance(raw, int) and not isinstance(raw, bool):
        return raw
    if isinstance(raw, tuple):
        flat = []
        for item in raw:
            if isinstance(item, tuple):
                flat.extend(item)
            else:
                flat.append(item)
        if flat and all(isinstance(v, int) for v in flat) and len(set(flat)) == 1:
            return flat[0]
    raise _err_layer(f"only symmetric zero-padding is supported, got {raw!r}",
                     node)


def _permute_helper_classes(info: SourceInfo) -> set:
    """Local nn.Module subclasses whose forward just permutes its input."""
    helpers = set()
    for stmt in info.tree.root.body:
        if not isinstance(stmt, ast.ClassDef):
            continue
        bases = [resolve_dotted(b, info.aliases) for b in stmt.bases]
        if not any(matches_suffix(p, ("torch.nn.Module",)) for p in bases):
            continue
        fwd = next((s for s in stmt.body
                    if isinstance(s, ast.FunctionDef) and s.name == "forward"),
                   None)
        if fwd is None:
            continue
        body = [s for s in fwd.body if not _is_docstring(s)]
        if len(body) != 1 or not isinstance(body[0], ast.Return):
            continue
        ret = body[0].value
        if (isinstance(ret, ast.Call) and isinstance(ret.func, ast.Attribute)
                and ret.func.attr == "permute"):
            helpers.add(stmt.name)
    return helpers


class _ExtractorBase:
    def __init__(self, info: SourceInfo, framework: str, depth: int = 0):
        self.info = info
        self.framework = framework
        self.depth = depth
        self.collector = Collector()
        self.scope: Scope = info.module_scope
        self.subnn_networks: dict = {}

    def resolve(self, node):
        return resolve_dotted(node, self.info.aliases)

    def classify_layer_kind(self, path: str | None) -> str | None:
        """Pivot kind for a constructor path in this extractor's framework."""
        if path is None:
            return None
        root = path.split(".")[0]
        fw_roots = R.TF_ROOTS if self.framework == R.TF else R.PT_ROOTS
        if root not in fw_roots:
            return None
        return R.MATCH_TABLES[self.framework].get(path.rsplit(".", 1)[-1])

    def bind_layer(self, call: ast.Call):
        path = self.resolve(call.func)
        kind = self.classify_layer_kind(path)
        if kind is None:
            return None
        return bind_layer_call(call, kind, self.framework, self.scope)

    def bind_bidirectional(self, call: ast.Call):
        """keras Bidirectional(wrapped_rnn) -> rnn spec with bidirectional."""
        path = self.resolve(call.func)
        if self.framework != R.TF or not matches_suffix(
                path, ("keras.layers.Bidirectional",)):
            return None
        for kw in call.keywords:
            if kw.arg == "merge_mode":
                value = const_arg(kw.value, self.scope, call, "merge_mode")
                if value != "concat":
                    raise _err_layer(
                        f"unsupported Bidirectional merge_mode {value!r}", call)
            elif kw.arg != "name":
                raise _err_layer(
                    f"unsupported Bidirectional keyword '{kw.arg}'", call)
        if len(call.args) != 1 or not isinstance(call.args[0], ast.Call):
            raise _err_layer("Bidirectional needs a wrapped recurrent layer", call)
        inner = self.bind_layer(call.args[0])
        if inner is None or inner.spec.kind not in T.RNN_KINDS:
            raise _err_layer("Bidirectional wraps only recurrent layers", call)
        inner.spec = inner.spec.with_attrs(bidirectional=True)
        return inner

    def dynamic_symbol_sources(self, modules) -> tuple:
        """(symbol, initializer source) pairs for every dynamic activation."""
        from .symbols import ExprBinding

        collected = {}
        for m in modules:
            refs = []
            if m.layer is not None and m.layer.activation.kind == "dynamic":
                refs.append(m.layer.activation.name)
            for sym in refs:
                if sym in collected:
                    continue
                binding = self.scope.lookup(sym)
                if isinstance(binding, ExprBinding):
                    collected[sym] = binding.source
        return tuple(sorted(collected.items()))


class SubclassingExtractor(_ExtractorBase):
    """Lifts a framework-derived model class into pivot modules."""

    def __init__(self, info, framework, cls: ModelClassInfo, depth=0):
        super().__init__(info, framework, depth)
        self.cls = cls
        self.layer_attrs: dict = {}
        self.act_attrs: dict = {}
        self.subnn_attrs: dict = {}
        self.zeropad_attrs: dict = {}
        self.env: dict = {}
        self.rnn_outputs: set = set()  # vars holding a full recurrent sequence

    def extract(self):
        if self.depth > MAX_SUBNN_DEPTH:
            raise RecursionDepthError(
                f"sub-network nesting exceeds {MAX_SUBNN_DEPTH}")
        if self.cls.init is None or self.cls.forward is None:
            raise _err_construct(
                f"model class '{self.cls.node.name}' needs a constructor and a "
                "forward/call method", self.cls.node)
        self_scope = Scope(self.info.module_scope)
        init_scope = build_scope(self.cls.init.body,
                                 parent=self.info.module_scope,
                                 self_scope=self_scope)
        # Symbol lookups inside the class see locals, self attributes, then
        # module scope; self.<x> and bare x share the attribute namespace.
        merged = Scope(init_scope)
        merged.bindings = self_scope.bindings
        self.scope = merged
        self._walk_init()
        terminal = self._walk_forward()
        modules = self._finalize()
        return modules, terminal

    def _finalize(self):
        self.collector.fold_zero_padding()
        if self.framework == R.PT:
            self.collector.strip_layout_adapters()
        return self.collector.finalize()

    # --- constructor ---------------------------------------------------------

    def _walk_init(self):
        local_classes = {c.node.name: c for c in self.info.classes}
        for stmt in self.cls.init.body:
            if _is_docstring(stmt):
                continue
            if (isinstance(stmt, ast.Expr) and isinstance(stmt.value, ast.Call)
                    and isinstance(stmt.value.func, ast.Attribute)
                    and isinstance(stmt.value.func.value, ast.Call)
                    and isinstance(stmt.value.func.value.func, ast.Name)
                    and stmt.value.func.value.func.id == "super"):
                continue  # super().__init__()
            if not isinstance(stmt, ast.Assign) or len(stmt.targets) != 1:
                raise _err_construct(
                    "only straight-line assignments are supported in the "
                    "constructor", stmt)
            target = stmt.targets[0]
            if isinstance(target, ast.Name):
                continue  # plain local; already in scope
            if not (isinstance(target, ast.Attribute)
                    and isinstance(target.value, ast.Name)
                    and target.value.id == "self"):
                raise _err_construct("unsupported assignment target", stmt)
            attr = target.attr
            value = stmt.value
            if not isinstance(value, ast.Call):
                continue  # constant attribute; already in the symbol scope
            self._register_attr(attr, value, local_classes)

    def _register_attr(self, attr, call, local_classes):
        bound = self.bind_bidirectional(call) or self.bind_layer(call)
        if bound is not None:
            self.layer_attrs[attr] = (bound, _span(call))
            return
        path = self.resolve(call.func)
        act = _classify_activation_class(path, call, self.framework, self.scope)
        if act is not None:
            self.act_attrs[attr] = act
            return
        pad = _zero_padding(path, call, self.framework, self.scope)
        if pad is not None:
            self.zeropad_attrs[attr] = (pad, _span(call))
            return
        if isinstance(call.func, ast.Name) and call.func.id in local_classes:
            if call.args or call.keywords:
                raise _err_layer(
                    f"nested model '{call.func.id}' must be constructed "
                    "without arguments", call)
            self.subnn_attrs[attr] = (call.func.id, _span(call))
            inner = local_classes[call.func.id]
            sub = SubclassingExtractor(self.info, self.framework, inner,
                                       self.depth + 1)
            sub_modules, _ = sub.extract()
            self.subnn_networks[call.func.id] = T.PivotNN(
                call.func.id, sub_modules,
                subnets=tuple(sub.subnn_networks[n]
                              for n in sorted(sub.subnn_networks)))
            self.subnn_networks.update(sub.subnn_networks)
            return
        raise _err_layer(
            f"unsupported constructor call: {ast.unparse(call)}", call)

    # --- forward pass --------------------------------------------------------

    def _walk_forward(self):
        fn = self.cls.forward
        params = [a.arg for a in fn.args.args if a.arg != "self"]
        if not params:
            raise _err_construct("forward method takes no input", fn)
        self.env[params[0]] = T.INPUT
        terminal = None
        body = [s for s in fn.body if not _is_docstring(s)]
        for i, stmt in enumerate(body):
            if isinstance(stmt, ast.Return):
                if i != len(body) - 1 or stmt.value is None:
                    raise _err_construct(
                        "forward must end with a single return", stmt)
                terminal = self._eval(stmt.value)
                break
            if isinstance(stmt, ast.Assign) and len(stmt.targets) == 1:
                self._assign(stmt)
                continue
            raise _err_construct(
                "unsupported statement in the forward pass (no loops or "
                "conditionals)", stmt)
        if terminal is None:
            raise _err_construct("forward never returns a value", fn)
        return terminal

    def _assign(self, stmt):
        target = stmt.targets[0]
        if isinstance(target, ast.Name):
            self.env[target.id] = self._eval(stmt.value)
            return
        if isinstance(target, ast.Tuple):
            self._assign_unpack(target, stmt)
            return
        raise _err_construct("unsupported assignment target in forward", stmt)

    def _assign_unpack(self, target, stmt):
        """``out, _ = self.rnn(x)``: recurrent sequence plus ignored state."""
        names = target.elts
        if not names or not isinstance(names[0], ast.Name):
            raise _err_construct("unsupported tuple unpacking", stmt)
        value = stmt.value
        if not (isinstance(value, ast.Call)
                and self._self_attr(value.func) in self.layer_attrs):
            raise _err_construct(
                "tuple unpacking is supported only for recurrent outputs", stmt)
        attr = self._self_attr(value.func)
        bound, span = self.layer_attrs[attr]
        if bound.spec.kind not in T.RNN_KINDS:
            raise _err_construct(
                f"'{attr}' is not a recurrent layer; cannot unpack", stmt)
        producer = self._apply_layer(attr, value)
        # The unpacked tensor is the full sequence until a last-step slice.
        self.collector.set_return_sequences(producer, True, _span(stmt))
        self.env[names[0].id] = producer
        self.rnn_outputs.add(names[0].id)

    def _self_attr(self, node) -> str | None:
        if (isinstance(node, ast.Attribute) and isinstance(node.value, ast.Name)
                and node.value.id == "self"):
            return node.attr
        return None

    def _lookup_var(self, node):
        if isinstance(node, ast.Name):
            producer = self.env.get(node.id)
            if producer is None:
                raise _err_dataflow(
                    f"variable '{node.id}' is used before definition", node)
            return producer
        return self._eval(node)

    def _eval(self, node):
        """Producer module name of an expression, creating modules as needed."""
        if isinstance(node, ast.Name):
            return self._lookup_var(node)

        if isinstance(node, ast.Subscript):
            if _last_step_slice(node):
                producer = self._lookup_var(node.value)
                self.collector.set_return_sequences(producer, False, _span(node))
                return producer
            raise _err_construct(
                f"unsupported subscript: {ast.unparse(node)}", node)

        if isinstance(node, ast.BinOp):
            ops = {ast.Add: T.ADD, ast.Mult: T.MULTIPLY, ast.MatMult: T.MATMUL}
            kind = ops.get(type(node.op))
            if kind is None:
                raise _err_construct(
                    f"unsupported operator: {ast.unparse(node)}", node)
            left = self._eval(node.left)
            right = self._eval(node.right)
            return self.collector.add_op(T.TensorOpSpec(kind), [left, right],
                                         span=_span(node))

        if isinstance(node, ast.Call):
            return self._eval_call(node)

        raise _err_construct(f"unsupported expression: {ast.unparse(node)}", node)

    def _eval_call(self, call):
        attr = self._self_attr(call.func)
        if attr is not None:
            if attr in self.layer_attrs:
                bound, _ = self.layer_attrs[attr]
                if self.framework == R.PT and bound.spec.kind in T.RNN_KINDS:
                    raise _err_construct(
                        f"recurrent output of '{attr}' must be tuple-unpacked",
                        call)
                return self._apply_layer(attr, call)
            if attr in self.act_attrs:
                producer = self._single_arg(call)
                self.collector.fold_activation(producer, self.act_attrs[attr],
                                               _span(call))
                return producer
            if attr in self.subnn_attrs:
                ref, span = self.subnn_attrs[attr]
                producer = self._single_arg(call)
                return self.collector.add_subnn(ref, [producer],
                                                explicit_name=attr, span=span)
            if attr in self.zeropad_attrs:
                (pad, nd), span = self.zeropad_attrs[attr]
                producer = self._single_arg(call)
                return self.collector.add_zeropad(pad, nd, [producer],
                                                  explicit_name=attr, span=span)
            raise _err_layer(f"'self.{attr}' is not a declared module", call)

        # resolve_activation(symbol)(x): dynamic activation at runtime
        if (isinstance(call.func, ast.Call)
                and isinstance(call.func.func, ast.Name)
                and call.func.func.id == "resolve_activation"):
            inner = call.func
            if len(inner.args) != 1:
                raise _err_construct("resolve_activation takes one symbol", call)
            sym = inner.args[0]
            act = resolve_activation_value(sym, self.scope, call)
            producer = self._single_arg(call)
            self.collector.fold_activation(producer, act, _span(call))
            return producer

        path = self.resolve(call.func)
        func_act = _FUNC_ACTIVATIONS[self.framework].get(path)
        if func_act is not None:
            producer = self._single_arg(call, allow_extra_const=True)
            self.collector.fold_activation(
                producer, T.ActivationRef.literal(func_act), _span(call))
            return producer

        op_kind = _OP_CALLS[self.framework].get(path)
        if op_kind is not None:
            return self._eval_op_call(op_kind, call)

        if isinstance(call.func, ast.Attribute):
            return self._eval_method(call)

        raise _err_layer(f"unsupported call: {ast.unparse(call)}", call)

    def _apply_layer(self, attr, call):
        bound, span = self.layer_attrs[attr]
        if attr in self.collector.by_name:
            raise _err_construct(
                f"module '{attr}' is applied more than once (shared weights "
                "are unsupported)", call)
        producer = self._single_arg(call)
        return self.collector.add_layer(bound.spec, [producer],
                                        explicit_name=attr, span=span)

    def _single_arg(self, call, allow_extra_const=False):
        args = list(call.args)
        for kw in call.keywords:
            if kw.arg == "training":
                continue  # evaluation-mode flag; not part of the graph
            if allow_extra_const and kw.arg in ("dim", "axis"):
                continue
            raise _err_construct(
                f"unsupported keyword '{kw.arg}' in {ast.unparse(call)}", call)
        if allow_extra_const and len(args) == 2:
            args = args[:1]
        if len(args) != 1:
            raise _err_construct(
                f"expected a single input argument: {ast.unparse(call)}", call)
        return self._eval(args[0])

    def _eval_op_call(self, op_kind, call):
        span = _span(call)
        kwargs = {kw.arg: kw.value for kw in call.keywords}

        if op_kind == "@flatten":
            # torch.flatten(x, 1): flatten everything but the batch dim
            producer = self._eval(call.args[0])
            rest = [const_arg(a, self.scope, call, "flatten dim")
                    for a in call.args[1:]]
            if "start_dim" in kwargs:
                rest.append(const_arg(kwargs["start_dim"], self.scope, call,
                                      "start_dim"))
            if rest != [1]:
                raise _err_construct(
                    "only flattening from dim 1 is supported", call)
            return self.collector.add_layer(T.LayerSpec(T.FLATTEN, {}),
                                            [producer], span=span)

        if op_kind == "@tf_transpose":
            producer = self._eval(call.args[0])
            perm = kwargs.get("perm")
            if perm is None and len(call.args) > 1:
                perm = call.args[1]
            if perm is None:
                raise _err_construct(
                    "transpose without an explicit perm is unsupported", call)
            order = const_arg(perm, self.scope, call, "perm")
            return self.collector.add_op(
                T.TensorOpSpec(T.PERMUTE, {"order": tuple(order)}),
                [producer], span=span)

        if op_kind == T.CONCATENATE:
            seq = call.args[0]
            if not isinstance(seq, (ast.List, ast.Tuple)):
                raise _err_construct("concatenate expects a list of tensors",
                                     call)
            producers = [self._eval(e) for e in seq.elts]
            axis_node = kwargs.get(_AXIS_KW[self.framework])
            if axis_node is None and len(call.args) > 1:
                axis_node = call.args[1]
            axis = (const_arg(axis_node, self.scope, call, "axis")
                    if axis_node is not None else -1)
            return self.collector.add_op(
                T.TensorOpSpec(T.CONCATENATE, {"axis": axis}), producers,
                span=span)

        if op_kind == T.RESHAPE:
            producer = self._eval(call.args[0])
            target = const_arg(call.args[1], self.scope, call, "shape")
            return self.collector.add_op(
                T.TensorOpSpec(T.RESHAPE, {"shape": _reshape_target(target, call)}),
                [producer], span=span)

        if op_kind == T.PERMUTE:
            producer = self._eval(call.args[0])
            order = const_arg(call.args[1], self.scope, call, "permute order")
            return self.collector.add_op(
                T.TensorOpSpec(T.PERMUTE, {"order": tuple(order)}),
                [producer], span=span)

        if op_kind == T.TRANSPOSE:
            producer = self._eval(call.args[0])
            d0 = const_arg(call.args[1], self.scope, call, "dim0")
            d1 = const_arg(call.args[2], self.scope, call, "dim1")
            return self.collector.add_op(
                T.TensorOpSpec(T.TRANSPOSE, {"dim0": d0, "dim1": d1}),
                [producer], span=span)

        if op_kind in (T.ADD, T.MULTIPLY, T.MATMUL):
            left = self._eval(call.args[0])
            right = self._eval(call.args[1])
            return self.collector.add_op(T.TensorOpSpec(op_kind), [left, right],
                                         span=span)

        raise _err_construct(f"unsupported tensor op: {ast.unparse(call)}", call)

    def _eval_method(self, call):
        """Tensor method forms: x.permute(...), x.reshape(...), x.transpose,
        x.view(x.size(0), -1)."""
        method = call.func.attr
        recv = call.func.value
        span = _span(call)

        if self.framework == R.PT and method == "permute":
            producer = self._eval(recv)
            order = tuple(const_arg(a, self.scope, call, "permute order")
                          for a in call.args)
            if len(order) == 1 and isinstance(order[0], tuple):
                order = order[0]
            return self.collector.add_op(
                T.TensorOpSpec(T.PERMUTE, {"order": order}), [producer],
                span=span)

        if self.framework == R.PT and method == "reshape":
            producer = self._eval(recv)
            target = tuple(const_arg(a, self.scope, call, "shape")
                           for a in call.args)
            if len(target) == 1 and isinstance(target[0], tuple):
                target = target[0]
            return self.collector.add_op(
                T.TensorOpSpec(T.RESHAPE, {"shape": _reshape_target(target, call)}),
                [producer], span=span)

        if self.framework == R.PT and method == "transpose":
            producer = self._eval(recv)
            d0 = const_arg(call.args[0], self.scope, call, "dim0")
            d1 = const_arg(call.args[1], self.scope, call, "dim1")
            return self.collector.add_op(
                T.TensorOpSpec(T.TRANSPOSE, {"dim0": d0, "dim1": d1}),
                [producer], span=span)

        if self.framework == R.PT and method == "view":
            # x.view(x.size(0), -1) is the classic flatten idiom
            if (isinstance(recv, ast.Name) and len(call.args) == 2
                    and isinstance(call.args[0], ast.Call)
                    and isinstance(call.args[0].func, ast.Attribute)
                    and call.args[0].func.attr == "size"
                    and isinstance(call.args[0].func.value, ast.Name)
                    and call.args[0].func.value.id == recv.id
                    and isinstance(call.args[1], ast.UnaryOp)):
                producer = self._eval(recv)
                return self.collector.add_layer(T.LayerSpec(T.FLATTEN, {}),
                                                [producer], span=span)
            raise _err_construct(
                f"unsupported view: {ast.unparse(call)}", call)

        raise _err_layer(f"unsupported call: {ast.unparse(call)}", call)


def _reshape_target(target, node):
    if not isinstance(target, tuple) or not target:
        raise _err_construct(f"unsupported reshape target {target!r}", node)
    if target[0] != -1:
        raise _err_construct(
            "reshape must keep the batch dimension (leading -1)", node)
    return tuple(target[1:])


class SequentialExtractor(_ExtractorBase):
    """Lifts a sequential-container construction into a pivot chain."""

    def __init__(self, info, framework, seq: SequentialInfo):
        super().__init__(info, framework)
        self.seq = seq
        self.input_shape = None
        self.explicit_name = None
        self.permute_helpers = (
            _permute_helper_classes(info) if framework == R.PT else set())

    def extract(self):
        if self.seq.enclosing_init is not None:
            self_scope = Scope(self.info.module_scope)
            build_scope(self.seq.enclosing_init.body,
                        parent=self.info.module_scope, self_scope=self_scope)
            self.scope = self_scope
        elements = self._elements()
        prev = T.INPUT
        for name, node in elements:
            prev = self._element(name, node, prev)
        self.collector.fold_zero_padding()
        if self.framework == R.PT:
            self.collector.strip_layout_adapters()
        modules = self.collector.finalize()
        terminal = prev
        return modules, terminal

    def _elements(self):
        """(explicit name or None, module expression) in container order."""
        call = self.seq.call
        items = []
        listed = None
        if call.args and isinstance(call.args[0], (ast.List, ast.Tuple)):
            listed = call.args[0].elts
        elif self.framework == R.PT and len(call.args) == 1 \
                and isinstance(call.args[0], ast.Call) \
                and matches_suffix(self.resolve(call.args[0].func),
                                   ("collections.OrderedDict",)):
            od = call.args[0]
            if not od.args or not isinstance(od.args[0], (ast.List, ast.Tuple)):
                raise _err_construct("OrderedDict needs a list of pairs", od)
            for pair in od.args[0].elts:
                if (not isinstance(pair, ast.Tuple) or len(pair.elts) != 2
                        or not isinstance(pair.elts[0], ast.Constant)):
                    raise _err_construct("expected (name, module) pairs", pair)
                items.append((pair.elts[0].value, pair.elts[1]))
        elif self.framework == R.PT and call.args:
            listed = call.args
        for kw in call.keywords:
            if kw.arg == "name" and self.framework == R.TF:
                self.explicit_name = const_arg(kw.value, self.scope, call, "name")
            elif kw.arg == "layers" and self.framework == R.TF and listed is None:
                if not isinstance(kw.value, (ast.List, ast.Tuple)):
                    raise _err_construct("layers= expects a list", call)
                listed = kw.value.elts
            else:
                raise _err_construct(
                    f"unsupported container keyword '{kw.arg}'", call)
        if listed is not None:
            items.extend((None, e) for e in listed)
        for add in self.seq.add_calls:
            if len(add.args) != 1 or add.keywords:
                raise _err_construct("add() takes exactly one layer", add)
            items.append((None, add.args[0]))
        return items

    def _element(self, explicit_name, node, prev):
        if not isinstance(node, ast.Call):
            raise _err_layer(
                f"unsupported container element: {ast.unparse(node)}", node)
        path = self.resolve(node.func)
        span = _span(node)

        if self.framework == R.TF and matches_suffix(
                path, ("keras.Input", "keras.layers.InputLayer")):
            self._declared_input(node)
            return prev

        bound = self.bind_bidirectional(node) or self.bind_layer(node)
        if bound is not None:
            if bound.input_shape is not None and self.input_shape is None:
                self.input_shape = bound.input_shape
            return self.collector.add_layer(
                bound.spec, [prev],
                explicit_name=explicit_name or bound.name, span=span)

        act = _classify_activation_class(path, node, self.framework, self.scope)
        if act is not None:
            if prev == T.INPUT:
                raise _err_construct(
                    "activation cannot be the first container element", node)
            self.collector.fold_activation(prev, act, span)
            return prev

        pad = _zero_padding(path, node, self.framework, self.scope)
        if pad is not None:
            return self.collector.add_zeropad(pad[0], pad[1], [prev],
                                              explicit_name=explicit_name,
                                              span=span)

        if (isinstance(node.func, ast.Name)
                and node.func.id in self.permute_helpers):
            order = tuple(const_arg(a, self.scope, node, "permute order")
                          for a in node.args)
            return self.collector.add_op(
                T.TensorOpSpec(T.PERMUTE, {"order": order}), [prev],
                explicit_name=explicit_name, span=span)

        raise _err_layer(
            f"unsupported container element: {ast.unparse(node)}", node)

    def _declared_input(self, call):
        shape = None
        for kw in call.keywords:
            if kw.arg in ("shape", "input_shape"):
                shape = const_arg(kw.value, self.scope, call, "shape")
            elif kw.arg in ("dtype", "name", "batch_size"):
                continue
            else:
                raise _err_construct(
                    f"unsupported input keyword '{kw.arg}'", call)
        if shape is None and call.args:
            shape = const_arg(call.args[0], self.scope, call, "shape")
        if shape is not None and self.input_shape is None:
            if isinstance(shape, int):
                shape = (shape,)
            self.input_shape = tuple(shape)
