"""Exception hierarchy.

Two families matter to callers: :class:`ParameterError` for bad inputs
(CLI exit code 1) and :class:`NumericalError` for failures of the numerics
themselves (CLI exit code 2).
"""

from __future__ import annotations


class NQSyncError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(NQSyncError, ValueError):
    """Invalid input. ``key`` names the offending parameter when known."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class BogoliubovDivergence(ParameterError):
    pass


class NonPositiveGeometry(ParameterError):
    pass


class UnknownMaterial(ParameterError, KeyError):
    def __str__(self) -> str:  # KeyError would otherwise repr() the message
        return str(self.args[0])


class ConfigError(ParameterError):
    pass


class NumericalError(NQSyncError, ArithmeticError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class UnstableSystem(NumericalError):
    pass


class SingularSolve(NumericalError):
    pass


class UnphysicalCovariance(NumericalError):
    pass


class ZeroSyncDegree(NumericalError, ValueError):
    pass


class Diverged(NumericalError):
    pass


class NotConverged(NumericalError):
    pass


class NoCrossing(NumericalError):
    pass
