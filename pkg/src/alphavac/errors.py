"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A matrix failed a Hermiticity, trace, positivity or shape check."""


class DomainError(ValueError):
    """An argument lies outside the domain of a physical formula."""


class IntegrationError(RuntimeError):
    """A numerically evolved state violated a density-matrix invariant."""

    def __init__(self, tau, reason):
        self.tau = tau
        self.reason = reason
        super().__init__(f"integration failed at tau={tau:.6g}: {reason}")


class DegeneratePostSelectionError(ValueError):
    """The post-selection probability of a filtering operation vanished."""
