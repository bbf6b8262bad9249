"""Exception hierarchy shared across the toolkit."""


class QCIError(Exception):
    """Base class for all toolkit errors."""


class QasmParseError(QCIError):
    """Raised when OpenQASM source cannot be parsed.

    Carries the list of ParseDiagnostic objects describing what went wrong.
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        msg = "; ".join(
            f"{d.line}:{d.column}: {d.message}" for d in self.diagnostics
        )
        super().__init__(msg or "parse error")


class UnsupportedGateError(QCIError):
    """Requested a unitary for a kind that has none (measure/barrier)."""


class CapacityError(QCIError):
    """Simulation request exceeds the configured qubit cap."""


class InternalConsistencyError(QCIError):
    """Numerical drift beyond tolerance inside the simulator."""


class IncompatibilityError(QCIError):
    """Two objects cannot be compared (width or qubit-count mismatch)."""


class ConfigurationError(QCIError):
    """Invalid weights, thresholds, or other configuration values."""


class IneligibilityError(QCIError):
    """Circuit has no eligible site for the requested anomaly kind."""

    def __init__(self, kind, message=None):
        self.kind = kind
        super().__init__(message or f"no eligible site for anomaly kind '{kind}'")


class DegenerateSampleError(QCIError):
    """Correlation requested on a constant or too-small sample."""


class EmptyInputError(QCIError):
    """An operation that needs at least one value received none."""
