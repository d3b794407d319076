"""Exception and warning types shared across the package."""


class EHybridError(Exception):
    """Base class for all package errors."""


class DimensionError(EHybridError, ValueError):
    """Invalid Hilbert-space dimension or truncation."""


class ShapeError(EHybridError, ValueError):
    """Operator shape does not match the requested tensor structure."""


class ContractError(EHybridError, ValueError):
    """An input violates a documented precondition."""


class SingularityError(EHybridError, ArithmeticError):
    """A closed-form expression was evaluated on (or too near) a pole."""


class FitError(EHybridError, RuntimeError):
    """Least-squares fitting failed; carries the last iterate when available."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate


class ParseError(EHybridError, ValueError):
    """Malformed input file; the message names the offending line."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SchemaError(EHybridError, ValueError):
    """Input file is well formed but does not match the expected schema."""


class ConfigError(EHybridError, ValueError):
    """Configuration document could not be resolved."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class TruncationWarning(UserWarning):
    """Fock-space truncation has not converged."""


class RangeWarning(UserWarning):
    """Data range is too narrow for a reliable estimate."""
