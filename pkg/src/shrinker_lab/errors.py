"""Exception hierarchy shared across the package."""


class ShrinkerLabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(ShrinkerLabError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class NoSolutionError(ShrinkerLabError):
    """A requested level set or root does not exist."""


class IntegrationError(ShrinkerLabError):
    """ODE integration failed to meet its conservation tolerance."""


class NonConvergenceError(ShrinkerLabError):
    """A stop condition or iteration failed to converge within its budget."""


class BracketingError(ShrinkerLabError):
    """A root scan found no sign change in the allowed interval."""

    def __init__(self, message, scanned=None):
        super().__init__(message)
        self.scanned = scanned


class ConstructionError(ShrinkerLabError):
    """A catalog network could not be built or did not validate."""


class TopologyError(ShrinkerLabError):
    """Inconsistent region/boundary description."""


class IntegrandError(ShrinkerLabError):
    """A semi-infinite integrand lacks usable tail information."""


class AdmissibilityError(ShrinkerLabError):
    """A variation violates the junction compatibility condition."""


class CertificateError(ShrinkerLabError):
    """A negativity certificate failed one of its required checks."""
