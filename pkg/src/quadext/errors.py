"""Exception types shared across the package."""


class QuadExtError(Exception):
    """Base class for all library errors."""


class InvalidInputError(QuadExtError, ValueError):
    """Malformed input: dimension mismatch, bad flag, unreadable file."""


class NotPositiveDefiniteError(InvalidInputError):
    """A matrix required to be positive definite failed the definiteness gate."""


class RankDeficientError(InvalidInputError):
    """A basis matrix failed the full-rank gate."""


class PencilInfeasibleError(QuadExtError):
    """No point of the [0, 1] pencil family is PSD to tolerance.

    Carries the sweep evidence: the maximizing parameter and the smallest
    eigenvalue achieved there.
    """

    def __init__(self, message, alpha=None, min_eig=None):
        super().__init__(message)
        self.alpha = alpha
        self.min_eig = min_eig


class DegenerateZError(QuadExtError):
    """Every vector of the computed complement intersection lies in the
    kernel of the hyperplane functional, so no projection direction exists.

    Carries the best |phi(z)| achieved and, when raised from the extension
    pipeline, the zero-eigenvalue multiplicities of the two splits.
    """

    def __init__(self, message, achieved=0.0, zero_multiplicities=None):
        super().__init__(message)
        self.achieved = achieved
        self.zero_multiplicities = zero_multiplicities


class ExtensionVerificationError(QuadExtError):
    """The assembled extension report violates its own invariants."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = dict(residuals or {})
