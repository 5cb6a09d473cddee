"""Exception types shared across the package."""


class SkewBCError(Exception):
    """Base class for all package errors."""


class UnsupportedOrderError(SkewBCError, ValueError):
    """Requested operator order is not one of 2, 4, 6."""


class GridTooSmallError(SkewBCError, ValueError):
    """Grid has fewer nodes than the operator's boundary closure needs."""


class StateError(SkewBCError, ValueError):
    """Solution state violates a system invariant (positivity, finiteness)."""


class DegenerateRotationError(SkewBCError, ValueError):
    """Boundary rotation is singular (normal velocity below threshold)."""


class RegimeChangeError(SkewBCError, RuntimeError):
    """Flow regime at a face no longer matches its boundary specification."""


class ReconstructionError(SkewBCError, ValueError):
    """Strong imposition cannot reconstruct an admissible boundary state."""


class NumericalAbortError(SkewBCError, RuntimeError):
    """Time integration produced non-finite values."""

    def __init__(self, message: str, step: int, time: float):
        super().__init__(message)
        self.step = step
        self.time = time


class ConfigError(SkewBCError, ValueError):
    """Run configuration is invalid; message carries the offending path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
