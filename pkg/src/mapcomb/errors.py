"""Exception hierarchy shared by all mapcomb modules.

Two broad families matter for the command line front end: bad input
(ValidationError, exit code 2) and a computation that could not be
carried to the requested accuracy (NumericError, exit code 3).
"""

from __future__ import annotations

__all__ = [
    "MapcombError",
    "ValidationError",
    "NumericError",
    "OrderMismatch",
    "OrderExceeded",
    "NoContraction",
    "ParseError",
    "UnsupportedDegreeSet",
    "NotBipartite",
    "OracleBound",
    "NoSingularity",
    "RegionViolation",
    "InsufficientData",
    "EmptyDistribution",
    "DegenerateLaw",
]


class MapcombError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(MapcombError):
    """The request itself is malformed or outside the supported domain."""


class NumericError(MapcombError):
    """A numeric procedure failed to reach the requested tolerance."""


class OrderMismatch(ValidationError):
    """Two series with different truncation orders were combined."""


class OrderExceeded(ValidationError):
    """A coefficient beyond the truncation order was requested."""


class NoContraction(NumericError):
    """A fixed-point iteration failed to stabilize within the order bound."""


class ParseError(ValidationError):
    """A degree-set expression could not be parsed."""


class UnsupportedDegreeSet(ValidationError):
    """The degree set is a subset of {1, 2}; no such map family is handled."""


class NotBipartite(ValidationError):
    """An all-even degree set was required but an odd valency is allowed."""


class OracleBound(ValidationError):
    """The brute-force oracle was asked for more edges than it can scan."""


class NoSingularity(NumericError):
    """No singular point was found in the admissible range."""


class RegionViolation(NumericError):
    """A solved point left the convergence region of the bridge sums."""


class InsufficientData(ValidationError):
    """Too few counts were supplied to extrapolate a growth constant."""


class EmptyDistribution(ValidationError):
    """A distribution table with no mass was used where mass is required."""


class DegenerateLaw(MapcombError):
    """A limit-law diagnostic was requested for a deterministic statistic."""
