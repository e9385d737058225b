"""Exception types shared across the package."""


class HyperbasisError(Exception):
    """Base class for all package errors."""


class DomainError(HyperbasisError, ValueError):
    """An argument lies outside the mathematical domain of a formula."""


class InputError(HyperbasisError, ValueError):
    """Malformed or inadmissible input data."""


class InvalidMetric(HyperbasisError):
    """A metric model is inconsistent (event radii decrease, disks overlap)."""


class BoundViolation(HyperbasisError):
    """A recorded radius exceeds its closed-form bound."""

    def __init__(self, step: int, radius: float, bound: float):
        self.step = step
        self.radius = radius
        self.bound = bound
        super().__init__(
            f"step {step}: radius {radius!r} exceeds bound {bound!r}"
        )


class EmbeddingError(HyperbasisError):
    """A map description does not define a sphere embedding."""


class ConstructionError(HyperbasisError):
    """Internal failure while building the double cover (indicates a bug)."""


class GeometricAssumptionViolated(HyperbasisError):
    """Input configuration cannot arise from disk growth on a cone sphere."""


class VerificationFailure(HyperbasisError):
    """A pruning-result invariant failed verification."""
