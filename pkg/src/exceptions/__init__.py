# src/exceptions/__init__.py

"""Custom exceptions for the time-frequency uncertainty laboratory."""

from typing import Optional, Sequence


class TfuError(Exception):
    """Base class for every error raised by the laboratory."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.message = message
        self.field = field
        super().__init__(self.message)


class InvalidGridError(TfuError):
    """Raised when grid parameters violate spacing or count constraints."""


class IncompatibleGridsError(TfuError):
    """Raised when two operands live on different grids."""

    def __init__(self, message: str = "Operands are defined on different grids", field: Optional[str] = "grid"):
        super().__init__(message, field)


class SamplingError(TfuError):
    """Raised when a sampled function returns a non-finite value."""

    def __init__(self, node: Sequence[float], value: complex):
        self.node = tuple(float(c) for c in node)
        self.value = value
        super().__init__(f"Non-finite value {value!r} at node {self.node}", "samples")


class NoJointFormError(TfuError):
    """Raised when a joint kernel value is requested from a time-multiplier kernel."""


class NoTimeFormError(TfuError):
    """Raised when a time-multiplier form is requested from a kernel that has none."""


class ResolutionLimitError(TfuError):
    """Raised when the direct quadrature path is asked for a grid that is too large."""

    def __init__(self, nodes: int, limit: int):
        self.nodes = nodes
        self.limit = limit
        message = f"Tabulated kernel quadrature is limited to {limit} nodes per axis, got {nodes}"
        super().__init__(message, "count")


class KernelPreconditionError(TfuError):
    """Raised when a kernel does not satisfy the condition an identity relies on."""


class ZeroNormError(TfuError):
    """Raised when a moment is requested from a signal or distribution of zero norm."""

    def __init__(self, what: str = "signal"):
        super().__init__(f"Cannot normalize a {what} with zero norm", what)


class SpectralTruncationError(TfuError):
    """Raised when a spectrum does not decay at the edge of its frequency grid."""

    def __init__(self, message: str, edge_ratio: float):
        self.edge_ratio = edge_ratio
        super().__init__(message, "spectrum")


class SpanError(TfuError):
    """Raised when a generated signal is not contained in its grid."""


class PartitionError(TfuError):
    """Raised when chirp partition sets overlap or do not cover every axis."""


class CasePreconditionError(TfuError):
    """Raised when a (signal, kernel) pair does not match the requested theorem case."""

    def __init__(self, case: str, condition: str):
        self.case = case
        self.condition = condition
        super().__init__(f"Case {case} requires {condition}", "case")


class KernelSpecError(TfuError):
    """Raised when a kernel spec string cannot be parsed."""

    def __init__(self, message: str, spec: Optional[str] = None):
        self.spec = spec
        super().__init__(message, "kernel")


class SerializationError(TfuError):
    """Raised when a signal, distribution or report file cannot be read or written."""

    def __init__(self, message: str, data_type: Optional[str] = None, field: Optional[str] = None):
        self.data_type = data_type
        super().__init__(message, field)


class UnsupportedDimensionError(TfuError):
    """Raised when an operation is only implemented for one-dimensional grids."""

    def __init__(self, operation: str, dim: int):
        self.operation = operation
        self.dim = dim
        super().__init__(f"{operation} supports N = 1 grids only, got N = {dim}", "dim")
