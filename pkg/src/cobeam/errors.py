"""Exception types shared across the package.

Everything raised on purpose derives from :class:`CobeamError`, so callers
can catch the package's failures without also swallowing programming bugs.
"""


class CobeamError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(CobeamError):
    """A scenario, option set, or command line is malformed or inconsistent."""


class UserNotVisible(CobeamError):
    """A user sits below the minimum elevation angle of some satellite."""


class InvalidDirection(CobeamError):
    """Direction cosines fall outside the unit disk (u**2 + v**2 > 1)."""


class NoCandidateCluster(CobeamError):
    """A user ends up with zero candidate clusters across all satellites."""


class ZeroDirectChannel(CobeamError):
    """A cluster's own-user channel vector is numerically zero."""


class Infeasible(CobeamError):
    """No transmit power satisfies the SINR targets (dual variables diverge)."""


class NotConverged(CobeamError):
    """Fixed-point iteration hit the iteration cap before reaching tolerance."""


class SingularF(CobeamError):
    """The power-coupling matrix could not be solved reliably."""


class NegativePower(CobeamError):
    """Power scaling produced a meaningfully negative per-user power."""


class OracleTooLarge(CobeamError):
    """Exhaustive search was asked to enumerate more assignments than its cap."""
