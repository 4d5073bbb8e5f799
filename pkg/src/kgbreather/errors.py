"""Exception types shared across the package.

NumericsError subclasses signal a failure of the numerical machinery
(blowup, tolerance miss, degenerate data); ConfigError signals a bad
experiment configuration.  The CLI maps ConfigError to exit code 1 and
NumericsError to exit code 2.
"""


class ConfigError(Exception):
    """Invalid experiment configuration; message names the offending key."""


class NumericsError(Exception):
    """Base class for numerical failures."""


class InvalidParam(NumericsError):
    """Parameter outside the admissible range of an algorithm."""


class CflViolation(NumericsError):
    """Time step too large relative to the grid spacing."""


class NumericalBlowup(NumericsError):
    """Field magnitude exceeded the blowup guard threshold."""


class NonFiniteSample(NumericsError):
    """An initial-condition sample was NaN or infinite."""


class GridTooSmall(NumericsError):
    """Spatial grid cannot hold the requested profile to tolerance."""


class GridTooNarrow(NumericsError):
    """Co-moving grid does not reach far enough into the envelope tails."""


class SingularSystem(NumericsError):
    """Discrete boundary-value operator is numerically singular."""


class ToleranceNotMet(NumericsError):
    """Independent cross-check disagreed beyond the allowed tolerance."""


class NoExtremaFound(NumericsError):
    """No local maxima above threshold; the pulse decayed or left the domain."""


class TooFewExtrema(NumericsError):
    """Not enough envelope knots to build an interpolant."""


class DegenerateVariance(NumericsError):
    """A correlation input vector is (numerically) constant."""
