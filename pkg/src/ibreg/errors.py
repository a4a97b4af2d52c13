"""Semantic exception hierarchy.

Every error raised by this package derives from :class:`IbregError`, so
callers can catch one base class.  The subclasses separate "you passed a bad
argument" failures from genuine numerical/solver failures; the CLI maps the
former to exit code 2 and the latter to exit code 3.
"""


class IbregError(Exception):
    """Base class for all errors raised by ibreg."""


class AxisError(IbregError):
    """Unknown, duplicate, or colliding axis name."""


class ArgumentError(IbregError):
    """Structurally invalid argument (overlapping axis sets, too few points, ...)."""


class DomainError(IbregError):
    """Scalar argument or model parameter outside its valid range."""


class DegenerateEventError(IbregError):
    """Conditioning on an event of (numerically) zero probability."""


class DegenerateModelError(IbregError):
    """Model parameters produce a degenerate covariance/log argument."""


class CardinalityError(IbregError):
    """Auxiliary alphabet exceeds its cardinality bound."""


class StructureError(IbregError):
    """Channel stack violates the required Markov/ordering structure."""


class SolverError(IbregError):
    """A numerical solver failed to locate a root or bracket."""


class ComparisonError(IbregError):
    """Two curves cannot be compared (e.g. disjoint rate ranges)."""


class ConfigError(IbregError):
    """Invalid model/request configuration (CLI-facing)."""
