"""Exception types shared across the package."""


class SchuboundError(Exception):
    """Base class for all package-specific errors."""


class NotFiniteType(SchuboundError):
    """Cartan matrix is not of finite type, or root closure failed to terminate."""


class NonIntegralCoroot(SchuboundError):
    """A coroot expansion came out non-integral; signals a convention bug."""


class UnknownRoot(SchuboundError):
    """The given vector is not a positive root of the system."""


class CoefficientOverflow(SchuboundError):
    """A coefficient left the range of the checked fixed-width backend."""


class WrongGrade(SchuboundError):
    """Operation applied to a vector of unsuitable grade."""


class InvalidDegree(SchuboundError):
    """Degree argument out of range."""


class RankTooLarge(SchuboundError):
    """Brute-force verification requested beyond its supported rank."""


class Interrupted(SchuboundError):
    """Search interrupted; a checkpoint was written if one was configured."""


class MemoryBudgetExceeded(SchuboundError):
    """A configured memory budget was exceeded."""


class UsageError(SchuboundError):
    """Invalid command-line or request arguments."""
