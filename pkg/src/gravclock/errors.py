"""Exception types shared across the package."""


class GravclockError(Exception):
    """Base class for all package-specific errors."""


class DomainError(GravclockError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class WeakFieldViolation(DomainError):
    """The compactness 2GM/(c^2 r) exceeds the configured weak-field bound."""


class NotTimelike(DomainError):
    """A trajectory segment is not timelike (the proper-time radicand is <= 0)."""


class NoConvergence(GravclockError, RuntimeError):
    """An iterative solver hit its sweep cap before reaching tolerance."""


class DimensionMismatch(GravclockError, ValueError):
    """Quantum-state dimensions or labels are incompatible with an operation."""


class UnknownLabel(DimensionMismatch):
    """A subsystem label is not present in a state's label set."""


class ConfigError(GravclockError, ValueError):
    """A run configuration contains unknown keys or out-of-domain values."""
