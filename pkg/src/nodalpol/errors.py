"""Exception types shared across the package."""

from __future__ import annotations


class NodalPolError(ValueError):
    """Base class for all domain errors raised by this package."""


class InvalidCurveError(NodalPolError):
    """The dual-graph data violate a structural invariant."""


class SchemaError(NodalPolError):
    """A JSON document does not match the expected schema."""


class InvalidPolarizationError(NodalPolError):
    """Weights are not positive rationals summing to one."""


class NonAmpleMultidegreeError(NodalPolError):
    """A multidegree with a non-positive entry induces no polarization."""


class CanonicalUndefinedError(NodalPolError):
    """The canonical polarization is only defined on stable curves."""


class InvalidSheafError(NodalPolError):
    """Sheaf datum entries violate the rank/stalk constraints."""


class UnsupportedRankError(NodalPolError):
    """The subcurve stability criterion only applies to rank-one data."""


class UnsupportedCurveError(NodalPolError):
    """The operation's curve-level preconditions are not met."""


class PathIdentityError(NodalPolError):
    """A path-system bookkeeping identity failed for a sheaf datum."""
