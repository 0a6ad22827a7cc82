class DiffcheckError(Exception):
    """Base error for the comparison harness."""


class LayerCountMismatch(DiffcheckError):
    """The two models do not have the same number of learnable units."""


class WeightShapeMismatch(DiffcheckError):
    """A tensor's layout-adjusted shape does not match its counterpart."""


class OutputShapeMismatch(DiffcheckError):
    """The two models produced differently shaped outputs."""
