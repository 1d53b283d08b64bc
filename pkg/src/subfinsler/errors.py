"""Exception types shared across the package."""


class SubFinslerError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SubFinslerError, ValueError):
    """Family parameters lie outside the admissible domain."""


class NotGenerating(SubFinslerError):
    """The subspace does not generate the Lie algebra."""


class DegenerateIntersection(SubFinslerError):
    """q ∩ N(q) did not come out one-dimensional at the working tolerance."""


class InconsistentCase(SubFinslerError):
    """Adapted structure constants fall between the decidable cases."""


class StepTooLarge(SubFinslerError):
    """Step-doubling error estimate exceeded the allowed bound."""


class BranchError(SubFinslerError, ValueError):
    """A solution branch was forced that disagrees with the discriminant."""


class UnknownFamily(SubFinslerError):
    """The tensor does not carry a catalog family label."""
