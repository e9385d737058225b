"""Short homologically independent loop systems on marked cone spheres.

Simulates simultaneous disk growth around the 2g+2 cone points of a
hyperelliptic quotient sphere, prunes the resulting arc graph to a
system whose lift to the branched double cover is homologically
independent, and evaluates the closed-form length and energy bounds
that govern the construction.
"""

from . import bounds, cover, families, growth, hypmodel, jacobian, prune, spheremap
from .errors import (
    BoundViolation,
    ConstructionError,
    DomainError,
    EmbeddingError,
    GeometricAssumptionViolated,
    HyperbasisError,
    InputError,
    InvalidMetric,
    VerificationFailure,
)

__version__ = "0.1.0"

__all__ = [
    "bounds",
    "cover",
    "families",
    "growth",
    "hypmodel",
    "jacobian",
    "prune",
    "spheremap",
    "BoundViolation",
    "ConstructionError",
    "DomainError",
    "EmbeddingError",
    "GeometricAssumptionViolated",
    "HyperbasisError",
    "InputError",
    "InvalidMetric",
    "VerificationFailure",
    "__version__",
]
