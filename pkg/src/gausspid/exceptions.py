"""Exception hierarchy for gausspid.

Every error raised by this package derives from :class:`GaussPidError`, so
callers (notably the CLI) can separate domain failures from programming bugs.
"""


class GaussPidError(Exception):
    """Base class for all gausspid errors."""


class DimensionMismatch(GaussPidError):
    """Matrix shape and declared block dimensions disagree."""


class AsymmetryTooLarge(GaussPidError):
    """Input covariance is asymmetric beyond the symmetrization tolerance."""


class NotPositiveDefinite(GaussPidError):
    """Covariance matrix fails the positive-definiteness check."""

    def __init__(self, message: str, smallest_eigenvalue: float | None = None):
        super().__init__(message)
        self.smallest_eigenvalue = smallest_eigenvalue


class SingularNoise(GaussPidError):
    """A conditional noise covariance is numerically singular."""


class SingularConditional(GaussPidError):
    """Conditional covariance of the message block is numerically singular
    (the mutual information would be infinite)."""


class SingularCovariance(GaussPidError):
    """A covariance argument to the KL divergence is not positive definite."""


class NotDegraded(GaussPidError):
    """A degradation witness was requested for a direction that does not hold."""


class WitnessVerificationFailed(GaussPidError):
    """The constructed degradation witness failed its numeric verification."""


class SingularWeight(GaussPidError):
    """Internal error: the objective weight matrix is singular (cannot occur
    for valid whitened channels)."""


class NumericalBreakdown(GaussPidError):
    """The solver produced non-finite iterates."""


class InfeasibleSigma(GaussPidError):
    """The recovered noise covariance has eigenvalues below the clamp floor,
    signalling solver failure rather than round-off."""


class SingularComposite(GaussPidError):
    """The composite channel covariance is singular (contract violation)."""


class DegenerateTotalMI(GaussPidError):
    """Total mutual information is too small to normalize against."""


class EmptyInput(GaussPidError):
    """An aggregate operation received no records."""
