"""Exception types shared across the package."""


class OtimputeError(Exception):
    """Base class for all package-specific failures."""


class DomainError(OtimputeError, ValueError):
    """An argument lies outside its mathematical domain."""


class EstimationError(OtimputeError, ValueError):
    """The input data cannot support the requested estimate."""


class CSVFormatError(OtimputeError, ValueError):
    """A CSV input violates the expected `y,t[,x]` schema."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class ConvergenceError(OtimputeError, RuntimeError):
    """An iterative solver ran out of iterations."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class NumericalError(OtimputeError, RuntimeError):
    """A computation produced a non-finite intermediate value."""


class MonotonicityError(OtimputeError, RuntimeError):
    """A transport-map update broke monotonicity (step too large)."""
