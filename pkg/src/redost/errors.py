"""Exception types raised across the package."""


class RedostError(Exception):
    """Base class for all errors raised by this package."""


class NoConvergence(RedostError):
    """Newton iteration exhausted its budget before the increment tolerance.

    Carries the last increment norm and the iteration count so callers can
    decide whether to retry with a better seed or a larger budget.
    """

    def __init__(self, message, last_increment=None, iterations=None):
        super().__init__(message)
        self.last_increment = last_increment
        self.iterations = iterations


class RangeViolation(RedostError):
    """A wave profile left the validity region of its equation family."""


class AliasingFailure(RedostError):
    """Fourier coefficients have not decayed below tolerance by mode M/4."""


class ValidityViolation(RedostError):
    """A functional or operator was evaluated outside its validity region."""

    def __init__(self, message, min_value=None):
        super().__init__(message)
        self.min_value = min_value


class MeanNonzero(RedostError):
    """A grid function that must have zero mean does not."""


class EigensolverFailure(RedostError):
    """A dense eigenvalue or pencil solve did not converge."""


class BandMisidentification(RedostError):
    """Band tracking lost the ground band inside a curvature stencil.

    Carries the gap between the competing eigenvalues at the offending
    quasi-momentum.
    """

    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap


class NoPositiveReference(RedostError):
    """The stability pencil is not positive definite at the reference speed.

    Carries the smallest eigenvalue found there.
    """

    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class ComplexPencil(RedostError):
    """Generalized eigenvalues with significant imaginary parts interfere
    with boundary selection near the reference speed."""


class UnsupportedEquation(RedostError):
    """The requested quantity does not exist for this equation family."""
