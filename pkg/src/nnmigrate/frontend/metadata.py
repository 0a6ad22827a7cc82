"""Recovery of training configuration, dataset references and file-level
constants (declared input shape, model name) from the source module."""

from __future__ import annotations

import ast

from .. import registry as R
from ..pivot import types as T
from .common import SourceInfo, matches_suffix, resolve_dotted
from .symbols import ConstBinding, literal_value, NOT_CONST

# Library-default learning rates applied when the source omits one.
OPTIMIZER_DEFAULT_LR = {
    R.TF: {"sgd": 0.01, "adam": 0.001, "adamw": 0.001, "rmsprop": 0.001},
    R.PT: {"sgd": 0.01, "adam": 0.001, "adamw": 0.001, "rmsprop": 0.01},
}
_FIT_DEFAULT_BATCH = 32
_FIT_DEFAULT_EPOCHS = 1

_METRIC_ALIASES = {
    "accuracy": "accuracy", "acc": "accuracy",
    "f1-score": "f1-score", "f1_score": "f1-score",
}


def module_constant(info: SourceInfo, name: str):
    binding = info.module_scope.lookup(name)
    if isinstance(binding, ConstBinding):
        return binding.value
    return None


def declared_input_shape(info: SourceInfo) -> tuple | None:
    value = module_constant(info, "INPUT_SHAPE")
    if isinstance(value, int):
        return (value,)
    if isinstance(value, tuple) and value:
        return value
    return None


def declared_model_name(info: SourceInfo) -> str | None:
    value = module_constant(info, "MODEL_NAME")
    return value if isinstance(value, str) else None


def _const(node):
    value = literal_value(node)
    return None if value is NOT_CONST else value


def extract_config(info: SourceInfo, framework: str) -> T.TrainingConfig | None:
    if framework == R.TF:
        return _config_tf(info)
    return _config_pt(info)


def _config_tf(info):
    compile_call = None
    fit_call = None
    for node in ast.walk(info.tree.root):
        if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Attribute):
            continue
        if node.func.attr == "compile" and compile_call is None:
            compile_call = node
        elif node.func.attr == "fit" and fit_call is None:
            fit_call = node
    if compile_call is None:
        return None

    optimizer = loss = None
    lr = None
    metrics = []
    for kw in compile_call.keywords:
        if kw.arg == "optimizer":
            optimizer, lr = _tf_optimizer(kw.value, info)
        elif kw.arg == "loss":
            loss = _tf_loss(kw.value, info)
        elif kw.arg == "metrics":
            metrics = _metric_list(kw.value, info)
    if optimizer is None or loss is None:
        return None
    if lr is None:
        lr = OPTIMIZER_DEFAULT_LR[R.TF][optimizer]

    epochs = module_constant(info, "EPOCHS")
    batch = module_constant(info, "BATCH_SIZE")
    if fit_call is not None:
        for kw in fit_call.keywords:
            if kw.arg == "epochs" and epochs is None:
                raw = _const(kw.value)
                epochs = raw if isinstance(raw, int) else _as_const_symbol(
                    kw.value, info)
            elif kw.arg == "batch_size" and batch is None:
                raw = _const(kw.value)
                batch = raw if isinstance(raw, int) else _as_const_symbol(
                    kw.value, info)
    return T.TrainingConfig(
        optimizer=optimizer, learning_rate=lr, loss=loss,
        batch_size=batch if isinstance(batch, int) else _FIT_DEFAULT_BATCH,
        epochs=epochs if isinstance(epochs, int) else _FIT_DEFAULT_EPOCHS,
        metrics=tuple(metrics))


def _as_const_symbol(node, info):
    if isinstance(node, ast.Name):
        return module_constant(info, node.id)
    return None


def _tf_optimizer(node, info):
    value = _const(node)
    if isinstance(value, str):
        name = R.OPTIMIZER_ALIASES.get(value)
        return name, None
    if isinstance(node, ast.Call):
        path = resolve_dotted(node.func, info.aliases) or ""
        name = R.OPTIMIZER_ALIASES.get(path.rsplit(".", 1)[-1])
        lr = None
        for kw in node.keywords:
            if kw.arg == "learning_rate":
                lr = _const(kw.value)
        return name, lr
    return None, None


def _tf_loss(node, info):
    value = _const(node)
    if isinstance(value, str):
        return R.TF_LOSS_ALIASES.get(value)
    if isinstance(node, ast.Call):
        path = resolve_dotted(node.func, info.aliases) or ""
        return R.TF_LOSS_ALIASES.get(path.rsplit(".", 1)[-1])
    return None


def _metric_list(node, info):
    metrics = []
    if not isinstance(node, (ast.List, ast.Tuple)):
        return metrics
    for elt in node.elts:
        value = _const(elt)
        if isinstance(value, str) and value in _METRIC_ALIASES:
            metrics.append(_METRIC_ALIASES[value])
        elif isinstance(elt, ast.Call):
            path = resolve_dotted(elt.func, info.aliases) or ""
            if path.rsplit(".", 1)[-1] == "F1Score":
                metrics.append("f1-score")
    return metrics


def _config_pt(info):
    optimizer = loss = None
    lr = None
    for stmt in info.tree.root.body:
        if not isinstance(stmt, ast.Assign) or not isinstance(stmt.value, ast.Call):
            continue
        path = resolve_dotted(stmt.value.func, info.aliases) or ""
        tail = path.rsplit(".", 1)[-1]
        if ".optim." in path or path.startswith("torch.optim"):
            optimizer = R.OPTIMIZER_ALIASES.get(tail, optimizer)
            for kw in stmt.value.keywords:
                if kw.arg == "lr":
                    lr = _const(kw.value)
        elif tail in R.PT_LOSS_ALIASES and matches_suffix(
                path, (f"torch.nn.{tail}",)):
            loss = R.PT_LOSS_ALIASES[tail]
    if optimizer is None or loss is None:
        return None
    if lr is None:
        lr = OPTIMIZER_DEFAULT_LR[R.PT][optimizer]

    epochs = module_constant(info, "EPOCHS")
    batch = module_constant(info, "BATCH_SIZE")
    raw_metrics = module_constant(info, "METRICS")
    metrics = []
    if isinstance(raw_metrics, tuple):
        metrics = [_METRIC_ALIASES[m] for m in raw_metrics
                   if isinstance(m, str) and m in _METRIC_ALIASES]
    return T.TrainingConfig(
        optimizer=optimizer, learning_rate=lr, loss=loss,
        batch_size=batch if isinstance(batch, int) else _FIT_DEFAULT_BATCH,
        epochs=epochs if isinstance(epochs, int) else _FIT_DEFAULT_EPOCHS,
        metrics=tuple(metrics))


def extract_datasets(info: SourceInfo, framework: str) -> tuple:
    refs = []
    seen = set()

    declared = module_constant(info, "DATASETS")
    if isinstance(declared, tuple):
        for entry in declared:
            if not isinstance(entry, dict):
                continue
            name = entry.get("name")
            if not isinstance(name, str) or name in seen:
                continue
            seen.add(name)
            refs.append(T.DatasetRef(
                name=name, path=str(entry.get("path", "")),
                task=str(entry.get("task", "classification")),
                input_format=str(entry.get("input_format", "images"))))

    for node in ast.walk(info.tree.root):
        if not isinstance(node, ast.Call):
            continue
        path = resolve_dotted(node.func, info.aliases) or ""
        name = root_path = None
        if framework == R.TF and path.endswith(".load_data"):
            parts = path.split(".")
            if len(parts) >= 3 and parts[-3] == "datasets":
                name = parts[-2]
                root_path = ".".join(parts[:-1])
        elif framework == R.PT and ".datasets." in path \
                and path.startswith("torchvision"):
            name = path.rsplit(".", 1)[-1].lower()
            root_path = path
            for kw in node.keywords:
                if kw.arg == "root" and isinstance(_const(kw.value), str):
                    root_path = _const(kw.value)
        if name and name not in seen:
            task, input_format = R.KNOWN_DATASETS.get(
                name, ("classification", "images"))
            seen.add(name)
            refs.append(T.DatasetRef(name=name, path=root_path, task=task,
                                     input_format=input_format))
    return tuple(refs)
