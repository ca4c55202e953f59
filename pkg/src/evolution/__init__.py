"""Time propagation of the qubit density matrix."""

from .propagator import (
    DRIFT_LIMIT,
    POSITIVITY_LIMIT,
    IntegrationMethod,
    IntegratorConfig,
    Trajectory,
    evolve,
    evolve_exact,
    initial_state,
)

__all__ = [
    "DRIFT_LIMIT",
    "POSITIVITY_LIMIT",
    "IntegrationMethod",
    "IntegratorConfig",
    "Trajectory",
    "evolve",
    "evolve_exact",
    "initial_state",
]
