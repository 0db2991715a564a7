"""Exception hierarchy for the confluent Heun library."""


class HeunError(Exception):
    """Base class for all library errors."""


class InvalidBeta(HeunError, ValueError):
    """beta (or a shifted beta) sits on a negative integer."""


class OutOfDisk(HeunError, ValueError):
    """Evaluation point lies outside the accepted radius about z=0."""


class NoConvergence(HeunError, RuntimeError):
    """An iterative procedure hit its iteration cap."""


class DegreeTooLow(HeunError, ValueError):
    """A truncated series does not carry enough trusted coefficients."""


class AlphaZero(HeunError, ValueError):
    """The polynomial machinery needs alpha != 0."""


class DeltaConditionViolated(HeunError, ValueError):
    """Parameters do not satisfy the delta_N condition for the requested N."""


class VerificationFailed(HeunError, RuntimeError):
    """A constructed object failed its own consistency check."""
