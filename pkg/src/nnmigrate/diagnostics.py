"""Diagnostics and error types shared by every stage of the migration pipeline.

Each failure mode carries a stable numbered code so the CLI can print
``file:line:column`` locations and derive exit codes from severity. Library
entry points raise :class:`MigrationError` subclasses wrapping the same
diagnostics the validator returns as plain values.

Code ranges:
    E0xx  I/O and CLI plumbing
    E1xx  parsing and dialect detection
    E2xx  extraction (source AST -> pivot)
    E3xx  pivot validation and serialization
    E4xx  shape propagation and attribute inference
    E5xx  code generation
"""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"
NOTE = "note"

_SEVERITY_RANK = {NOTE: 0, WARNING: 1, ERROR: 2}


@dataclass(frozen=True)
class Diagnostic:
    """One reportable finding: a rule violation, an error, or an advisory note."""

    code: str
    rule: str
    message: str
    severity: str = ERROR
    module: str | None = None
    line: int | None = None
    column: int | None = None

    def render(self, path: str | None = None) -> str:
        loc = ""
        if self.line is not None:
            loc = f"{self.line}:{self.column if self.column is not None else 0}:"
        prefix = f"{path}:{loc} " if path else (f"{loc} " if loc else "")
        where = f" [module {self.module}]" if self.module else ""
        return f"{prefix}{self.severity} {self.code} {self.rule}: {self.message}{where}"


def highest_severity(diagnostics) -> str | None:
    """Return the most severe level present, or None for an empty list."""
    top = None
    for d in diagnostics:
        if top is None or _SEVERITY_RANK[d.severity] > _SEVERITY_RANK[top]:
            top = d.severity
    return top


class MigrationError(Exception):
    """Base error for every pipeline stage; wraps one or more diagnostics."""

    code = "E999"
    rule = "Internal"

    def __init__(self, message: str, *, module: str | None = None,
                 line: int | None = None, column: int | None = None,
                 diagnostics: list[Diagnostic] | None = None):
        super().__init__(message)
        if diagnostics is None:
            diagnostics = [Diagnostic(self.code, self.rule, message, ERROR,
                                      module=module, line=line, column=column)]
        self.diagnostics = diagnostics

    @property
    def diagnostic(self) -> Diagnostic:
        return self.diagnostics[0]


# --- I/O ------------------------------------------------------------------

class MissingInputFileError(MigrationError):
    code, rule = "E001", "MissingInputFile"


class OutputWriteError(MigrationError):
    code, rule = "E002", "OutputWrite"


# --- parse / detect --------------------------------------------------------

class SourceSyntaxError(MigrationError):
    """Source text does not parse under the pinned grammar."""

    code, rule = "E101", "SyntaxError"

    def __init__(self, message: str, *, line: int | None, column: int | None,
                 expected: str | None = None):
        super().__init__(message, line=line, column=column)
        self.line = line
        self.column = column
        self.expected = expected


class UnknownDialectError(MigrationError):
    code, rule = "E110", "UnknownDialect"


class MixedDialectError(MigrationError):
    code, rule = "E111", "MixedDialect"


# --- extraction ------------------------------------------------------------

class UnsupportedLayerError(MigrationError):
    code, rule = "E201", "UnsupportedLayer"


class UnresolvedDataflowError(MigrationError):
    code, rule = "E202", "UnresolvedDataflow"


class UnsupportedConstructError(MigrationError):
    code, rule = "E203", "UnsupportedConstruct"


class RecursionDepthError(MigrationError):
    code, rule = "E204", "RecursionDepth"


# --- pivot -----------------------------------------------------------------

class InvalidPivotError(MigrationError):
    """A pivot failed validation where a valid one is a precondition."""

    code, rule = "E301", "InvalidPivot"


class PivotFormatError(MigrationError):
    """A serialized pivot document is malformed or violates an invariant."""

    code, rule = "E310", "MalformedDocument"

    def __init__(self, message: str, *, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


# --- shapes ----------------------------------------------------------------

class ShapeMismatchError(MigrationError):
    code, rule = "E401", "ShapeMismatch"


class NegativeDimError(MigrationError):
    code, rule = "E402", "NegativeDim"


class ConflictingAttributeError(MigrationError):
    code, rule = "E403", "ConflictingAttribute"

    def __init__(self, message: str, *, module: str | None = None,
                 declared=None, inferred=None):
        super().__init__(message, module=module)
        self.declared = declared
        self.inferred = inferred


class UnresolvedBatchError(MigrationError):
    code, rule = "E404", "UnresolvedBatch"


# --- codegen ---------------------------------------------------------------

class NonChainForSequentialError(MigrationError):
    code, rule = "E501", "NonChainForSequential"


class MissingInputDimsError(MigrationError):
    code, rule = "E502", "MissingInputDims"


class SamePaddingStrideError(MigrationError):
    code, rule = "E503", "SamePaddingStride"


class UnsupportedPaddingError(MigrationError):
    code, rule = "E504", "UnsupportedPadding"
