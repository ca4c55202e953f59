"""Davies weak-coupling generator for a qubit coupled to an Ohmic bath.

H_Q = (epsilon/2) sigma_z and H_I = mu_x sigma_x + mu_z sigma_z. Jump operators
are the energy-eigenspace blocks A_kl = P_k H_I P_l with Bohr frequency
Omega_kl = lambda_k - lambda_l, lambda_{+1/-1} = +/- epsilon/2.

Each jump is damped at rate c(-Omega_kl), the bath spectrum at the energy the
jump hands to the bath: the lowering block A_{-1,+1} (Omega = -epsilon) carries
c(+epsilon). With this pairing the Gibbs state is the fixed point, which the
test-suite checks directly. The Lamb shift is sum s(Omega_kl) A_kl^dag A_kl.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.linalg import null_space

from bath import BathParams, PVQuadratureConfig, correlation_ft, hilbert_transform_s
from qubit_algebra import (
    IDENTITY,
    PROJ_EXCITED,
    PROJ_GROUND,
    SIGMA_X,
    SIGMA_Z,
    DensityMatrix,
    NonUniqueStationaryStateError,
    frozen_array,
    unvec,
    vec,
)

LOGGER = logging.getLogger(__name__)

_PROJECTORS: Dict[int, np.ndarray] = {+1: PROJ_EXCITED, -1: PROJ_GROUND}
_JUMP_ORDER: Tuple[Tuple[int, int], ...] = ((+1, -1), (-1, +1), (+1, +1), (-1, -1))
_HERMITIAN_TOL = 1e-12
_TRACE_PRESERVATION_TOL = 1e-10
_NULL_SPACE_RCOND = 1e-12


@dataclass(slots=True, frozen=True)
class QubitParams:
    """Qubit splitting and dimensionless couplings to the bath."""

    epsilon: float = 1.0
    mu_x: float = 0.0
    mu_z: float = 0.0

    def __post_init__(self) -> None:
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon!r}")
        if not self.mu_x >= 0.0:
            raise ValueError(f"mu_x must be >= 0, got {self.mu_x!r}")
        if not self.mu_z >= 0.0:
            raise ValueError(f"mu_z must be >= 0, got {self.mu_z!r}")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.epsilon

    def energy(self, k: int) -> float:
        return 0.5 * self.epsilon * k

    def hamiltonian(self) -> np.ndarray:
        return 0.5 * self.epsilon * SIGMA_Z

    def interaction(self) -> np.ndarray:
        return self.mu_x * SIGMA_X + self.mu_z * SIGMA_Z


@dataclass(slots=True, frozen=True, eq=False)
class JumpOperator:
    """A_kl together with its Bohr frequency Omega_kl and damping rate."""

    k: int
    l: int
    matrix: np.ndarray
    bohr_frequency: float
    rate: float

    def __post_init__(self) -> None:
        if not self.rate >= 0.0:
            raise ValueError(f"jump rate must be >= 0, got {self.rate!r}")
        object.__setattr__(self, "matrix", frozen_array(self.matrix))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.matrix)


@dataclass(slots=True, frozen=True, eq=False)
class DaviesGenerator:
    effective_hamiltonian: np.ndarray
    jumps: Tuple[JumpOperator, ...]
    epsilon: float = 1.0

    def __post_init__(self) -> None:
        h = np.asarray(self.effective_hamiltonian, dtype=complex)
        if h.shape != (2, 2) or np.max(np.abs(h - h.conj().T)) > _HERMITIAN_TOL:
            raise ValueError("effective Hamiltonian must be a Hermitian 2x2 matrix")
        if len(self.jumps) != 4:
            raise ValueError(f"expected 4 jump operators, got {len(self.jumps)}")
        object.__setattr__(self, "effective_hamiltonian", frozen_array(h))
        object.__setattr__(self, "jumps", tuple(self.jumps))

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.epsilon

    def rate(self, k: int, l: int) -> float:
        for jump in self.jumps:
            if (jump.k, jump.l) == (k, l):
                return jump.rate
        raise KeyError((k, l))


@dataclass(slots=True, frozen=True, eq=False)
class Superoperator4:
    """4x4 matrix acting on column-stacked density matrices."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"superoperator must be 4x4, got {m.shape}")
        residual = np.max(np.abs(vec(IDENTITY).conj() @ m))
        if residual > _TRACE_PRESERVATION_TOL:
            raise ValueError(f"superoperator does not preserve trace (residual {residual:.3e})")
        object.__setattr__(self, "matrix", frozen_array(m))

    def apply(self, matrix: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(matrix))


def build_jump_operators(q: QubitParams, b: BathParams) -> Tuple[JumpOperator, ...]:
    interaction = q.interaction()
    jumps = []
    for k, l in _JUMP_ORDER:
        matrix = _PROJECTORS[k] @ interaction @ _PROJECTORS[l]
        omega = q.energy(k) - q.energy(l)
        jumps.append(JumpOperator(k=k, l=l, matrix=matrix, bohr_frequency=omega, rate=correlation_ft(b, -omega)))
    return tuple(jumps)


def build_lamb_shift(
    q: QubitParams,
    b: BathParams,
    cfg: Optional[PVQuadratureConfig] = None,
) -> np.ndarray:
    """H_LS = sum_kl s(Omega_kl) A_kl^dag A_kl, diagonal in the energy basis."""

    cfg = cfg or PVQuadratureConfig()
    shift = np.zeros((2, 2), dtype=complex)
    s_cache: Dict[float, float] = {}
    for jump in build_jump_operators(q, b):
        if jump.is_zero:
            continue
        if jump.bohr_frequency not in s_cache:
            s_cache[jump.bohr_frequency] = hilbert_transform_s(b, jump.bohr_frequency, cfg)
        a = jump.matrix
        shift += s_cache[jump.bohr_frequency] * (a.conj().T @ a)
    LOGGER.debug("Lamb shift s(Omega): %s", {f"{k:+g}": v for k, v in sorted(s_cache.items())})
    return shift


def build_generator(
    q: QubitParams,
    b: BathParams,
    cfg: Optional[PVQuadratureConfig] = None,
    *,
    lamb_shift: bool = True,
) -> DaviesGenerator:
    jumps = build_jump_operators(q, b)
    h_eff = q.hamiltonian().astype(complex)
    if lamb_shift:
        h_eff = h_eff + build_lamb_shift(q, b, cfg)
    if b.c0_override_active and q.mu_z > 0.0:
        LOGGER.warning(
            "Using c(0) = pi*alpha*T_eff with T_eff=%g instead of the strict zero-temperature limit",
            b.c0_effective_temperature,
        )
    LOGGER.info(
        "Davies generator: mu_x=%g mu_z=%g alpha=%g omega_c=%g T=%g rates=%s lamb_shift=%s",
        q.mu_x,
        q.mu_z,
        b.alpha,
        b.omega_c,
        b.temperature,
        ", ".join(f"({j.k:+d},{j.l:+d}):{j.rate:.6g}" for j in jumps),
        lamb_shift,
    )
    return DaviesGenerator(effective_hamiltonian=h_eff, jumps=jumps, epsilon=q.epsilon)


def _generator_action(g: DaviesGenerator, rho: np.ndarray) -> np.ndarray:
    h = g.effective_hamiltonian
    out = -1j * (h @ rho - rho @ h)
    for jump in g.jumps:
        if jump.rate == 0.0 or jump.is_zero:
            continue
        a = jump.matrix
        a_dag = a.conj().T
        # (1/2)([A rho, A^dag] + [A, rho A^dag])
        a_rho = a @ rho
        rho_a_dag = rho @ a_dag
        out = out + 0.5 * jump.rate * (a_rho @ a_dag - a_dag @ a_rho + a @ rho_a_dag - rho_a_dag @ a)
    return out


def apply_generator(g: DaviesGenerator, rho: DensityMatrix | np.ndarray) -> np.ndarray:
    """Traceless Hermitian matrix L(rho)."""

    matrix = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    return _generator_action(g, matrix)


def to_superoperator(g: DaviesGenerator) -> Superoperator4:
    h = g.effective_hamiltonian
    eye = np.eye(2, dtype=complex)
    matrix = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for jump in g.jumps:
        if jump.rate == 0.0 or jump.is_zero:
            continue
        a = jump.matrix
        a_dag_a = a.conj().T @ a
        matrix = matrix + jump.rate * (
            np.kron(a.conj(), a) - 0.5 * np.kron(eye, a_dag_a) - 0.5 * np.kron(a_dag_a.T, eye)
        )
    return Superoperator4(matrix)


def stationary_state(g: DaviesGenerator) -> DensityMatrix:
    """Unique unit-trace null vector of the generator."""

    kernel = null_space(to_superoperator(g).matrix, rcond=_NULL_SPACE_RCOND)
    if kernel.shape[1] != 1:
        raise NonUniqueStationaryStateError(
            f"generator has a {kernel.shape[1]}-dimensional space of stationary states"
        )
    rho = unvec(kernel[:, 0])
    return DensityMatrix.from_matrix(rho / np.trace(rho))


def gibbs_state(q: QubitParams, b: BathParams) -> DensityMatrix:
    """diag(e^{-beta eps/2}, e^{beta eps/2})/Z; the ground state at T = 0."""

    if b.temperature == 0.0:
        return DensityMatrix(PROJ_GROUND)
    x = q.epsilon / b.temperature
    # populations 1/(1+e^x) and e^x/(1+e^x), written to avoid overflow
    excited = 0.5 * (1.0 - math.tanh(0.5 * x))
    return DensityMatrix(np.diag([excited, 1.0 - excited]).astype(complex))
