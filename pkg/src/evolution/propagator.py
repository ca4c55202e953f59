"""Fixed-step propagation of a qubit density matrix under a Davies generator.

Trajectories are sampled on the uniform grid t_j = j * dt, dt = periods * T / N,
with N = round(steps_per_period * periods). Every recorded state is
re-Hermitized and trace-normalized; the size of that correction is monitored.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from scipy.linalg import expm

from davies import DaviesGenerator, to_superoperator
from qubit_algebra import (
    DensityMatrix,
    IntegratorDriftError,
    PositivityViolationError,
    bloch_components,
    frozen_array,
    unvec,
    vec,
)

LOGGER = logging.getLogger(__name__)

MIN_STEPS_PER_PERIOD = 100
DRIFT_LIMIT = 1e-9
POSITIVITY_LIMIT = 1e-8
_UNIFORM_GRID_RTOL = 1e-9


class IntegrationMethod(str, Enum):
    RK4 = "rk4"
    EXACT_EXPM = "exact_expm"


@dataclass(slots=True, frozen=True)
class IntegratorConfig:
    """Step method, resolution and duration (in free periods) of an evolution."""

    method: IntegrationMethod = IntegrationMethod.RK4
    steps_per_period: int = 2000
    periods: float = 1.0

    def __post_init__(self) -> None:
        try:
            method = IntegrationMethod(self.method)
        except ValueError as exc:
            choices = ", ".join(m.value for m in IntegrationMethod)
            raise ValueError(f"unknown integration method {self.method!r}; expected one of {choices}") from exc
        object.__setattr__(self, "method", method)
        if (
            isinstance(self.steps_per_period, bool)
            or not math.isfinite(self.steps_per_period)
            or int(self.steps_per_period) != self.steps_per_period
        ):
            raise ValueError(f"steps_per_period must be an integer, got {self.steps_per_period!r}")
        if self.steps_per_period < MIN_STEPS_PER_PERIOD:
            raise ValueError(
                f"steps_per_period must be >= {MIN_STEPS_PER_PERIOD}, got {self.steps_per_period!r}"
            )
        object.__setattr__(self, "steps_per_period", int(self.steps_per_period))
        if not (math.isfinite(self.periods) and self.periods > 0.0):
            raise ValueError(f"periods must be a finite number > 0, got {self.periods!r}")

    @property
    def step_count(self) -> int:
        return max(1, round(self.steps_per_period * self.periods))


@dataclass(slots=True, frozen=True, eq=False)
class Trajectory:
    """Uniformly sampled states rho(t_j), stored as an (N, 2, 2) array."""

    times: np.ndarray
    states: np.ndarray
    max_correction: float = 0.0

    def __post_init__(self) -> None:
        times = np.array(self.times, dtype=float, copy=True)
        states = np.asarray(self.states, dtype=complex)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("trajectory needs a non-empty 1-d time grid")
        if states.shape != (times.size, 2, 2):
            raise ValueError(f"states must have shape ({times.size}, 2, 2), got {states.shape}")
        if times.size > 1:
            steps = np.diff(times)
            if np.any(steps <= 0.0) or np.ptp(steps) > _UNIFORM_GRID_RTOL * abs(steps[0]):
                raise ValueError("trajectory times must be ascending and uniformly spaced")
        times.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", frozen_array(states))

    def __len__(self) -> int:
        return int(self.times.size)

    def state(self, index: int) -> DensityMatrix:
        return DensityMatrix(self.states[index])

    @property
    def final(self) -> DensityMatrix:
        return self.state(-1)

    def bloch_vectors(self) -> np.ndarray:
        return bloch_components(self.states)

    def distances_to(self, reference: DensityMatrix) -> np.ndarray:
        """Trace distance of every recorded state to ``reference``."""

        offsets = self.bloch_vectors() - bloch_components(reference.matrix)
        return 0.5 * np.linalg.norm(offsets, axis=-1)


def initial_state(theta: float) -> DensityMatrix:
    """|theta><theta| with |theta> = cos(theta/2)|1> + sin(theta/2)|-1>."""

    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
    psi = np.array([math.cos(0.5 * theta), math.sin(0.5 * theta)], dtype=complex)
    return DensityMatrix(np.outer(psi, psi.conj()))


def _rk4_step(superop: np.ndarray, v: np.ndarray, dt: float) -> np.ndarray:
    k1 = superop @ v
    k2 = superop @ (v + 0.5 * dt * k1)
    k3 = superop @ (v + 0.5 * dt * k2)
    k4 = superop @ (v + dt * k3)
    return v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _stabilize(raw: np.ndarray, first_step: int) -> tuple[np.ndarray, float]:
    """Hermitize and trace-normalize a stack of states; return them and the largest correction."""

    hermitian = 0.5 * (raw + np.conj(np.swapaxes(raw, -1, -2)))
    traces = np.trace(hermitian, axis1=-2, axis2=-1).real
    corrected = hermitian / traces[:, np.newaxis, np.newaxis]
    corrections = np.max(np.abs(corrected - raw), axis=(-2, -1))
    worst = int(np.argmax(corrections))
    if corrections[worst] > DRIFT_LIMIT:
        raise IntegratorDriftError(
            f"step {first_step + worst}: Hermiticity/trace correction {corrections[worst]:.3e} exceeds {DRIFT_LIMIT:g}"
        )
    min_eigenvalues = 0.5 * (1.0 - np.linalg.norm(bloch_components(corrected), axis=-1))
    violations = np.flatnonzero(min_eigenvalues < -POSITIVITY_LIMIT)
    if violations.size:
        bad = int(violations[0])
        raise PositivityViolationError(
            f"step {first_step + bad}: minimum eigenvalue {min_eigenvalues[bad]:.3e} below -{POSITIVITY_LIMIT:g}"
        )
    return corrected, float(corrections[worst])


def _power_orbit(step: np.ndarray, v0: np.ndarray, steps: int) -> np.ndarray:
    """Rows step^k v0 for k = 0..steps, from blocks of precomputed powers of ``step``."""

    block = max(1, math.isqrt(steps))
    powers = np.empty((block, 4, 4), dtype=complex)
    powers[0] = np.eye(4)
    for j in range(1, block):
        powers[j] = step @ powers[j - 1]
    jump = step @ powers[-1]
    orbit = np.empty((steps + 1, 4), dtype=complex)
    head = v0
    for start in range(0, steps + 1, block):
        count = min(block, steps + 1 - start)
        orbit[start : start + count] = powers[:count] @ head
        head = jump @ head
    return orbit


def evolve(rho0: DensityMatrix, g: DaviesGenerator, cfg: IntegratorConfig) -> Trajectory:
    """Integrate d(rho)/dt = L(rho) over cfg.periods free periods.

    RK4 stages apply the 4x4 superoperator, which acts on vec(rho) exactly
    as ``apply_generator`` acts on rho; each step starts from the corrected
    state of the previous one. With ``exact_expm`` the states are powers of
    the one-step propagator exp(dt L) applied to rho0, computed in blocks,
    and the correction is measured on every one of them.
    """

    steps = cfg.step_count
    duration = cfg.periods * g.period
    dt = duration / steps
    times = np.linspace(0.0, duration, steps + 1)
    superop = to_superoperator(g).matrix
    v0 = vec(rho0.matrix).astype(complex)

    if cfg.method is IntegrationMethod.EXACT_EXPM:
        orbit = _power_orbit(expm(dt * superop), v0, steps)
        raw = orbit.reshape(steps + 1, 2, 2).transpose(0, 2, 1)
        states, max_correction = _stabilize(raw[1:], 1)
        states = np.concatenate([rho0.matrix[np.newaxis], states])
    else:
        states = np.empty((steps + 1, 2, 2), dtype=complex)
        states[0] = rho0.matrix
        v = v0
        max_correction = 0.0
        for step in range(1, steps + 1):
            corrected, correction = _stabilize(unvec(_rk4_step(superop, v, dt))[np.newaxis], step)
            max_correction = max(max_correction, correction)
            states[step] = corrected[0]
            v = vec(corrected[0])

    LOGGER.debug(
        "evolve: method=%s steps=%d dt=%.6g max correction %.3e",
        cfg.method.value,
        steps,
        dt,
        max_correction,
    )
    return Trajectory(times=times, states=states, max_correction=max_correction)


def evolve_exact(rho0: DensityMatrix, g: DaviesGenerator, t: Union[float, int]) -> DensityMatrix:
    """vec(rho(t)) = exp(t L) vec(rho0) by scaling and squaring."""

    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    if t == 0.0:
        return rho0
    v = expm(t * to_superoperator(g).matrix) @ vec(rho0.matrix)
    return DensityMatrix.from_matrix(unvec(v))
