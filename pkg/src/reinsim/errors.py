"""Exception hierarchy shared by the simulation, optimization and CLI layers."""


class ReinsimError(Exception):
    """Base class for all package errors."""


class ConfigError(ReinsimError, ValueError):
    """Invalid or unknown configuration entry."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


class ModelError(ReinsimError, ValueError):
    """A model coefficient returned an inadmissible value."""


class NumericalError(ReinsimError, ArithmeticError):
    """Base class for numerical failures (CLI exit code 2)."""


class NumericalBlowUp(NumericalError):
    """An Euler update produced a non-finite value."""

    def __init__(self, t, y):
        self.t = t
        self.y = y
        super().__init__(f"non-finite Euler update at t={t!r}, y={y!r}")


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance."""


class NoInteriorRoot(NumericalError):
    """The first-order condition has no sign change on the searched bracket."""
