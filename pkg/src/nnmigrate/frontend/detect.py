"""Framework and architecture-style detection.

The framework is decided by the imported namespace roots; the style by the
presence of a framework-derived model class (Subclassing) versus a
sequential-container construction (Sequential). When both patterns appear,
the pattern owning the terminal model object wins, with a diagnostic note.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import registry as R
from ..diagnostics import Diagnostic, NOTE, UnsupportedConstructError
from .common import SourceInfo, analyze_source, detect_framework, root_model_class
from .parse import SyntaxTree


@dataclass(frozen=True)
class Dialect:
    framework: str  # "tf" (channel-last) | "pt" (channel-first)
    style: str      # "sequential" | "subclassing"

    def __post_init__(self):
        assert self.framework in R.FRAMEWORKS and self.style in R.STYLES


def detect_dialect(tree: SyntaxTree) -> Dialect:
    dialect, _ = detect_with_notes(analyze_source(tree))
    return dialect


def detect_with_notes(info: SourceInfo, framework: str | None = None,
                      style: str | None = None) -> tuple:
    """Detect the dialect, honoring explicit framework/style overrides."""
    if framework is None:
        framework = detect_framework(info)
    notes = []
    if style is not None:
        return Dialect(framework, style), notes

    model_class = root_model_class(info, framework)
    sequentials = [s for s in info.sequentials if s.framework == framework]

    if model_class is not None and sequentials:
        terminal = info.terminal_assign
        if terminal and terminal[0] == "sequential":
            style = R.SEQUENTIAL
        else:
            style = R.SUBCLASSING
        notes.append(Diagnostic(
            "E112", "AmbiguousStyle",
            "both a model class and a sequential container are present; "
            f"using the terminal model object's style ({style})",
            NOTE))
    elif model_class is not None:
        style = R.SUBCLASSING
    elif sequentials:
        style = R.SEQUENTIAL
    else:
        raise UnsupportedConstructError(
            "no model definition found (neither a framework model class nor "
            "a sequential container)")

    return Dialect(framework, style), notes
