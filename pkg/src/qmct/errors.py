"""Exception types shared across the solver."""

from __future__ import annotations


class QmctError(Exception):
    """Base class for all solver errors."""


class ValidationError(QmctError):
    """An instance failed structural validation and cannot be solved."""

    def __init__(self, message: str, violations: tuple = ()):
        super().__init__(message)
        self.violations = violations


class NoPathError(QmctError):
    """A required path between two nodes does not exist."""


class InfeasibleError(QmctError):
    """Supplies cannot be routed to demands.

    ``certificate`` carries a machine-readable witness, e.g. a deficient
    terminal subset for transportation problems or a saturated cut for
    flow problems.
    """

    def __init__(self, message: str, certificate: dict | None = None):
        super().__init__(message)
        self.certificate = certificate or {}


class HorizonLimitError(QmctError):
    """A time expansion would exceed the configured layer limit."""

    def __init__(self, message: str, requested: int, limit: int):
        super().__init__(message)
        self.requested = requested
        self.limit = limit


class InternalCheckError(QmctError):
    """An internal consistency assertion failed; indicates a solver bug."""
