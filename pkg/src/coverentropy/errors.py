"""Exception hierarchy.

The CLI maps these onto exit codes: validation-type errors exit 2, resource
limits exit 3, verification failures exit 4.
"""


class CoverEntropyError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CoverEntropyError, ValueError):
    """Malformed input: bad spec file, broken invariant on a user model."""


class ModelMismatchError(ValidationError):
    """An element does not belong to the group model it was used with."""


class ActionLawError(ValidationError):
    """Generator maps are not continuous bijections or violate the action law."""


class ResourceLimitError(CoverEntropyError):
    """A configured cap (ball size, search nodes, points) was exceeded."""


class NotGeneratingError(ResourceLimitError):
    """A target set was not reached within the ball cap."""


class NoRefiningCoverError(CoverEntropyError):
    """Admissible open sets fail to cover the space (corrupt input)."""


class ExactnessUnavailable(CoverEntropyError):
    """An exact value was requested outside the exactness domain."""


class GroupFiniteError(ValidationError):
    """Operation needs an infinite group but the model is finite."""


class ExhaustedSearchError(ResourceLimitError):
    """Backtracking search ran out of candidates within its caps."""


class OscillationCoverUnavailable(CoverEntropyError):
    """No open cover has small enough oscillation for the given observables."""


class RatioConditionNotReached(CoverEntropyError):
    """The complexity sequence never satisfied the ratio condition."""


class InvariantViolation(CoverEntropyError):
    """An internal postcondition failed. Indicates a bug, never user error."""


class VerificationError(CoverEntropyError):
    """A certificate or report failed independent re-verification."""
