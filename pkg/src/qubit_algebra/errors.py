"""Exception hierarchy shared by the simulation packages."""

from __future__ import annotations


class UnphysicalStateError(ValueError):
    """Raised when an input does not describe a valid qubit state."""


class NumericalError(RuntimeError):
    """Base class for failures of a numerical procedure on valid input."""


class NonConvergenceError(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance."""


class NonUniqueStationaryStateError(NumericalError):
    """The generator has more than one stationary state."""


class PositivityViolationError(NumericalError):
    """An integrated state left the positive cone beyond tolerance."""


class IntegratorDriftError(NumericalError):
    """Hermiticity or trace drift per step exceeded the correction limit."""


class BranchAmbiguityError(NumericalError):
    """Eigenvector branches could not be matched between neighbouring times."""


class DegeneratePhaseError(NumericalError):
    """A retained eigenvector branch passes through a degeneracy."""


class VanishingVisibilityError(NumericalError):
    """The phase functional has (numerically) zero modulus, so its argument is undefined."""
