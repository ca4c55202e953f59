"""Davies weak-coupling generator."""

from .generator import (
    DaviesGenerator,
    JumpOperator,
    QubitParams,
    Superoperator4,
    apply_generator,
    build_generator,
    build_jump_operators,
    build_lamb_shift,
    gibbs_state,
    stationary_state,
    to_superoperator,
)

__all__ = [
    "DaviesGenerator",
    "JumpOperator",
    "QubitParams",
    "Superoperator4",
    "apply_generator",
    "build_generator",
    "build_jump_operators",
    "build_lamb_shift",
    "gibbs_state",
    "stationary_state",
    "to_superoperator",
]
