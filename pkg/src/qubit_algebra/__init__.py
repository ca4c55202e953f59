"""Two-level matrix algebra and the shared numerical error hierarchy."""

from .algebra import (
    IDENTITY,
    LOWERING,
    PROJ_EXCITED,
    PROJ_GROUND,
    RAISING,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    BlochVector,
    DensityMatrix,
    Spectral2,
    bloch_components,
    bloch_to_density,
    density_to_bloch,
    eig_hermitian2,
    fix_gauge,
    frozen_array,
    overlap,
    spectral_from_bloch,
    spectral_stack,
    trace_distance,
    unvec,
    vec,
)
from .errors import (
    BranchAmbiguityError,
    DegeneratePhaseError,
    IntegratorDriftError,
    NonConvergenceError,
    NonUniqueStationaryStateError,
    NumericalError,
    PositivityViolationError,
    UnphysicalStateError,
    VanishingVisibilityError,
)

__all__ = [
    "IDENTITY",
    "LOWERING",
    "PROJ_EXCITED",
    "PROJ_GROUND",
    "RAISING",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "BlochVector",
    "DensityMatrix",
    "Spectral2",
    "bloch_components",
    "bloch_to_density",
    "density_to_bloch",
    "eig_hermitian2",
    "fix_gauge",
    "frozen_array",
    "overlap",
    "spectral_from_bloch",
    "spectral_stack",
    "trace_distance",
    "unvec",
    "vec",
    "BranchAmbiguityError",
    "DegeneratePhaseError",
    "IntegratorDriftError",
    "NonConvergenceError",
    "NonUniqueStationaryStateError",
    "NumericalError",
    "PositivityViolationError",
    "UnphysicalStateError",
    "VanishingVisibilityError",
]
