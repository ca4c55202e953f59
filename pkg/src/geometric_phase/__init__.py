"""Spectral tracking and the geometric phase of mixed-state evolutions."""

from .phase import (
    PhaseResult,
    PhaseWindow,
    SpectralTrajectory,
    free_phase,
    geometric_phase,
    phase_representative,
    spectral_track,
)

__all__ = [
    "PhaseResult",
    "PhaseWindow",
    "SpectralTrajectory",
    "free_phase",
    "geometric_phase",
    "phase_representative",
    "spectral_track",
]
