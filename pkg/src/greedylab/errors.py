"""Exception hierarchy for greedylab."""

from __future__ import annotations


class GreedyLabError(Exception):
    """Base class for every error raised by this package."""


class InvalidOrderError(GreedyLabError, ValueError):
    """Requested approximation order N is outside 1..dim."""


class IndexRangeError(GreedyLabError, IndexError):
    """A coordinate lies outside 1..dim."""


class DomainError(GreedyLabError, ValueError):
    pass


class FieldError(GreedyLabError, TypeError):
    """Real and complex scalars were mixed in one computation."""


class IncompletePatternError(GreedyLabError, ValueError):
    pass


class NotInHullError(GreedyLabError, ValueError):
    pass


class SizeGuardError(GreedyLabError, RuntimeError):
    """An enumeration would exceed its configured size guard."""


class PrecisionError(GreedyLabError, RuntimeError):
    """A numerical routine could not reach its requested accuracy.

    ``best`` carries the best value found so far when one exists.
    """

    def __init__(self, message: str, best: float | None = None):
        super().__init__(message)
        self.best = best


class LayoutError(GreedyLabError, ValueError):
    pass


class DependencyError(GreedyLabError, KeyError):
    """A bound needs a constant estimate that was not supplied."""

    def __init__(self, kind: str, N: int):
        super().__init__(f"missing estimate {kind!r} at N={N}")
        self.kind = kind
        self.N = N


class ConfigError(GreedyLabError, ValueError):
    pass


class InternalConsistencyError(GreedyLabError, AssertionError):
    pass
