"""Geometric phase of a non-unitary qubit evolution from its spectral decomposition.

For rho(t) = sum_i p_i(t) |w_i(t)><w_i(t)| the phase at the end of the grid is

    Phi = arg sum_i sqrt(p_i(0) p_i(T)) <w_i(0)|w_i(T)> prod_k tau_ik,
    tau_ik = conj(<w_i(t_k)|w_i(t_k+1)>) / |<w_i(t_k)|w_i(t_k+1)>|,

a product of per-step parallel-transport factors. Multiplying any w_i(t_k) by a
phase cancels between neighbouring factors, so the result does not depend on
the eigenvector gauge.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from evolution import Trajectory
from qubit_algebra import (
    BranchAmbiguityError,
    DegeneratePhaseError,
    VanishingVisibilityError,
    spectral_stack,
)

LOGGER = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
EMPTY_BRANCH_WEIGHT = 1e-12
AMBIGUITY_TOL = 1e-12
VISIBILITY_FLOOR = 1e-9
_STEP_OVERLAP_FLOOR = 1e-300


class PhaseWindow(str, Enum):
    ZERO_TO_2PI = "zero_to_2pi"
    MINUS_PI_TO_PI = "minus_pi_to_pi"

    @classmethod
    def parse(cls, text: "str | PhaseWindow") -> "PhaseWindow":
        """Accept the enum values and the short CLI spellings ``zero2pi``/``pmpi``."""

        if isinstance(text, cls):
            return text
        aliases = {"zero2pi": cls.ZERO_TO_2PI, "pmpi": cls.MINUS_PI_TO_PI}
        key = str(text).strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError as exc:
            raise ValueError(
                f"unknown phase window {text!r}; expected zero2pi, pmpi, zero_to_2pi or minus_pi_to_pi"
            ) from exc


@dataclass(slots=True, frozen=True, eq=False)
class SpectralTrajectory:
    """Branch-matched eigen-decomposition along a trajectory.

    ``p[k, i]`` and ``w[k, i]`` are the eigenvalue and eigenvector of branch
    ``i`` at ``times[k]``; ``degenerate[k]`` marks points where the eigenbasis
    is arbitrary and the previous vectors were carried over.
    """

    times: np.ndarray
    p: np.ndarray
    w: np.ndarray
    degenerate: np.ndarray

    def __post_init__(self) -> None:
        times = np.array(self.times, dtype=float, copy=True)
        p = np.array(self.p, dtype=float, copy=True)
        w = np.array(self.w, dtype=complex, copy=True)
        degenerate = np.array(self.degenerate, dtype=bool, copy=True)
        n = times.size
        if n < 2:
            raise ValueError("spectral trajectory needs at least 2 time points")
        if p.shape != (n, 2) or w.shape != (n, 2, 2) or degenerate.shape != (n,):
            raise ValueError(
                f"inconsistent shapes: times {times.shape}, p {p.shape}, w {w.shape}, degenerate {degenerate.shape}"
            )
        for name, array in (("times", times), ("p", p), ("w", w), ("degenerate", degenerate)):
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    def __len__(self) -> int:
        return int(self.times.size)

    def step_overlaps(self) -> np.ndarray:
        """<w_i(t_k)|w_i(t_k+1)> with shape (N-1, 2)."""

        return np.einsum("kij,kij->ki", self.w[:-1].conj(), self.w[1:])

    def rephased(self, phases: np.ndarray) -> "SpectralTrajectory":
        """Copy with w_i(t_k) multiplied by exp(i phases[k, i])."""

        phases = np.asarray(phases, dtype=float)
        if phases.shape != self.p.shape:
            raise ValueError(f"phases must have shape {self.p.shape}, got {phases.shape}")
        return SpectralTrajectory(
            times=self.times,
            p=self.p,
            w=self.w * np.exp(1j * phases)[..., np.newaxis],
            degenerate=self.degenerate,
        )


@dataclass(slots=True, frozen=True)
class PhaseResult:
    phi: float
    branch_factors: Tuple[complex, ...]
    magnitude: float
    window: PhaseWindow = PhaseWindow.ZERO_TO_2PI
    branch_count: int = 2

    def __post_init__(self) -> None:
        if not math.isfinite(self.phi):
            raise ValueError(f"phase must be finite, got {self.phi!r}")
        if not 0.0 <= self.magnitude <= 1.0 + 1e-9:
            raise ValueError(f"visibility {self.magnitude!r} outside [0, 1]")


def spectral_track(traj: Trajectory) -> SpectralTrajectory:
    """Eigen-decompose every state and match branches by maximal overlap.

    Each non-degenerate point is compared with the stored vectors of the last
    non-degenerate point before it; degenerate points carry those vectors over.
    """

    if len(traj) < 2:
        raise ValueError("spectral_track needs a trajectory with at least 2 points")
    n = len(traj)
    p_raw, w_raw, degenerate = spectral_stack(traj.bloch_vectors())
    positions = np.arange(n)
    anchor = np.maximum.accumulate(np.where(degenerate, 0, positions))

    reference = w_raw[anchor[:-1], 0]
    stay = np.abs(np.einsum("kj,kj->k", reference.conj(), w_raw[1:, 0]))
    cross = np.abs(np.einsum("kj,kj->k", reference.conj(), w_raw[1:, 1]))
    active = ~degenerate[1:]
    ambiguous = active & (np.abs(stay - cross) < AMBIGUITY_TOL)
    if np.any(ambiguous):
        k = int(np.argmax(ambiguous))
        raise BranchAmbiguityError(
            f"t={traj.times[k + 1]:.6g}: branch overlaps {stay[k]:.15g} and {cross[k]:.15g} cannot be told apart"
        )

    # a crossing flips the orientation of every later point relative to its raw spectrum
    crossing = np.concatenate([[False], active & (cross > stay)])
    swapped = np.logical_xor.accumulate(crossing) & ~degenerate
    p = np.where(swapped[:, np.newaxis], p_raw[:, ::-1], p_raw)
    w = np.where(swapped[:, np.newaxis, np.newaxis], w_raw[:, ::-1], w_raw)[anchor]

    for k in np.flatnonzero(crossing):
        LOGGER.debug("t=%.6g: eigenvalue branches cross, swapping", traj.times[k])
    LOGGER.debug(
        "spectral_track: %d points, %d swaps, %d degenerate", n, int(crossing.sum()), int(degenerate.sum())
    )
    return SpectralTrajectory(times=traj.times, p=p, w=w, degenerate=degenerate)


def phase_representative(phi_raw: float, window: PhaseWindow | str) -> float:
    """Map an angle into [0, 2pi) or (-pi, pi]."""

    window = PhaseWindow.parse(window)
    if window is PhaseWindow.ZERO_TO_2PI:
        value = float(np.mod(phi_raw, TWO_PI))
        # mod of a tiny negative number rounds to 2pi
        return 0.0 if value >= TWO_PI else value
    value = math.pi - float(np.mod(math.pi - phi_raw, TWO_PI))
    return value + TWO_PI if value <= -math.pi else value


def free_phase(theta: float) -> float:
    """pi (1 + cos theta) mod 2pi, the phase of the isolated qubit after one period."""

    return phase_representative(math.pi * (1.0 + math.cos(theta)), PhaseWindow.ZERO_TO_2PI)


def geometric_phase(
    st: SpectralTrajectory,
    window: PhaseWindow | str = PhaseWindow.ZERO_TO_2PI,
    *,
    drop_empty_branches: bool = True,
) -> PhaseResult:
    """Phase functional over the whole grid of ``st``.

    Branches with p_i(0) < 1e-12 carry zero weight. They are skipped when
    ``drop_empty_branches`` is set; otherwise their transport factor is still
    reported in ``branch_factors`` but adds exactly zero to the sum.
    """

    window = PhaseWindow.parse(window)
    step_overlaps = st.step_overlaps()
    passes_degeneracy = bool(np.any(st.degenerate))
    factors = []
    total = 0j
    for i in range(2):
        p_start = float(st.p[0, i])
        empty = p_start < EMPTY_BRANCH_WEIGHT
        if empty and drop_empty_branches:
            continue
        if passes_degeneracy:
            raise DegeneratePhaseError(
                f"branch {i} passes through a degeneracy at t={st.times[np.argmax(st.degenerate)]:.6g}"
            )
        steps = step_overlaps[:, i]
        moduli = np.abs(steps)
        if np.any(moduli < _STEP_OVERLAP_FLOOR):
            raise DegeneratePhaseError(f"branch {i} has a vanishing step overlap")
        transport = complex(np.prod(steps.conj() / moduli))
        endpoint = complex(np.vdot(st.w[0, i], st.w[-1, i]))
        weight = 0.0 if empty else math.sqrt(max(p_start, 0.0) * max(float(st.p[-1, i]), 0.0))
        factor = weight * endpoint * transport
        factors.append(factor)
        if not empty:
            total += factor

    magnitude = abs(total)
    if magnitude < VISIBILITY_FLOOR:
        raise VanishingVisibilityError(f"phase functional modulus {magnitude:.3e} below {VISIBILITY_FLOOR:g}")
    phi = phase_representative(math.atan2(total.imag, total.real), window)
    return PhaseResult(
        phi=phi,
        branch_factors=tuple(factors),
        magnitude=magnitude,
        window=window,
        branch_count=len(factors),
    )
