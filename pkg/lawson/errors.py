"""
Errors
======

Exception hierarchy for the lawson package.

Value-type problems (bad inputs, points outside an operation's domain) subclass
ValueError; numerical failures (a solver or an interval sweep that cannot
finish) subclass RuntimeError. Everything derives from LawsonError so callers
can catch the whole family at once.
"""


class LawsonError(Exception):
    """Base class for every error raised by the lawson package."""


# -----------------------------------------------------------------------------
# Domain errors
# -----------------------------------------------------------------------------

class SingularApexError(LawsonError, ValueError):
    """Pointwise evaluation requested at the apex z = 0."""


class OffConeError(LawsonError, ValueError):
    """An operation that needs a point on the cone received one off it."""


class DegenerateAxisError(LawsonError, ValueError):
    """The branch's power variable vanishes with an exponent d < 1."""


class UncertifiedPairError(LawsonError, ValueError):
    """The cone pair is not one of the certified pairs."""


class OracleUnreliableError(LawsonError, ValueError):
    """Finite-difference step too large for the distance to the cone or apex."""


class EmbeddednessError(LawsonError, ValueError):
    """A normal graph leaves the open quarter plane."""


class ProfileSupportError(LawsonError, ValueError):
    """A radial profile touches the apex or is malformed."""


class QuarterPlaneError(LawsonError, ValueError):
    """A profile curve leaves the quarter plane {r_x, r_y >= 0}."""


class UnboundedRegionError(LawsonError, ValueError):
    """A region passed to a volume quadrature is unbounded."""


class ConfigError(LawsonError, ValueError):
    """Invalid run configuration (bad cone spec, resolution, flag value)."""


# -----------------------------------------------------------------------------
# Numerical failures
# -----------------------------------------------------------------------------

class ZeroGradientError(LawsonError, ArithmeticError):
    """div g requested where the gradient of f vanishes."""


class ChainStepViolation(LawsonError, RuntimeError):
    """A step of an exact inequality chain failed to verify."""


class IntervalTooWideError(LawsonError, RuntimeError):
    """An interval enclosure stayed unbounded after maximal bisection."""


class EigensolverError(LawsonError, RuntimeError):
    """The sparse eigensolver did not converge."""
