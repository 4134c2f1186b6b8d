"""Exception hierarchy shared by every module."""


class ChoiscopeError(Exception):
    """Base class for all errors raised by choiscope."""


class DimensionError(ChoiscopeError, ValueError):
    """Shapes or declared dimensions are inconsistent."""


class ArgumentError(ChoiscopeError, ValueError):
    """An argument is outside its admissible range."""


class PropertyError(ChoiscopeError, ValueError):
    """An input lacks a required mathematical property (hermitian, PSD, ...).

    ``value`` carries the offending number when there is one, e.g. the most
    negative Choi eigenvalue when a Kraus decomposition is requested for a
    channel that is not completely positive.
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class ComputationError(ChoiscopeError, RuntimeError):
    """A numerical routine failed to converge or produced inconsistent output."""
