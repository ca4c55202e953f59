"""Ohmic bath: spectral density, correlation spectrum c(omega) and its Hilbert transform s(omega).

Units: hbar = k_B = 1 and the qubit splitting is the frequency unit, so
temperatures and frequencies share one scale.

c(omega) is written through the Bose occupation n(x) = 1/(e^x - 1):

    c(omega) = pi*alpha*|omega|*exp(-|omega|/omega_c) * (1 + n(beta|omega|))   omega > 0
    c(omega) = pi*alpha*|omega|*exp(-|omega|/omega_c) * n(beta|omega|)         omega < 0

which equals (pi*alpha/2)(|omega| coth(beta|omega|/2) + omega) exp(-|omega|/omega_c)
and keeps c(-omega)/c(omega) = exp(-beta*omega) accurate where the coth form cancels.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from scipy.integrate import quad

from qubit_algebra.errors import NonConvergenceError

LOGGER = logging.getLogger(__name__)

# Above this argument n(x) is below 1e-304; expm1 would overflow further out.
_BOSE_OVERFLOW = 700.0


@dataclass(slots=True, frozen=True)
class BathParams:
    """Ohmic bath parameters.

    ``c0_effective_temperature`` replaces the strict zero-temperature value
    c(0) = 0 by pi*alpha*T_eff. It only acts when ``temperature`` is 0.
    """

    alpha: float = 1e-2
    omega_c: float = 1e2
    temperature: float = 0.0
    c0_effective_temperature: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.alpha >= 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha!r}")
        if not self.omega_c > 0.0:
            raise ValueError(f"omega_c must be > 0, got {self.omega_c!r}")
        if not self.temperature >= 0.0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature!r}")
        if self.c0_effective_temperature is not None and not self.c0_effective_temperature >= 0.0:
            raise ValueError("c0_effective_temperature must be >= 0")

    @property
    def beta(self) -> float:
        return math.inf if self.temperature == 0.0 else 1.0 / self.temperature

    @property
    def c0_override_active(self) -> bool:
        return self.temperature == 0.0 and self.c0_effective_temperature is not None


@dataclass(slots=True, frozen=True)
class PVQuadratureConfig:
    """Settings for the principal-value quadrature.

    ``integration_halfwidth`` is a multiple of omega_c; the integrand is
    truncated to |x| <= integration_halfwidth * omega_c. ``interior_halfwidth``
    is the half-width h of the symmetrized window around the pole.
    """

    integration_halfwidth: float = 40.0
    interior_halfwidth: float = 1.0
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 500

    def __post_init__(self) -> None:
        if not self.rel_tol > 0.0:
            raise ValueError("rel_tol must be > 0")
        if not self.abs_tol >= 0.0:
            raise ValueError("abs_tol must be >= 0")
        if not self.integration_halfwidth > 0.0:
            raise ValueError("integration_halfwidth must be > 0")
        if not self.interior_halfwidth > 0.0:
            raise ValueError("interior_halfwidth must be > 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


def bose_occupation(x: float) -> float:
    if x > _BOSE_OVERFLOW:
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def spectral_density(params: BathParams, omega: float) -> float:
    """D(omega) = (alpha/2) omega exp(-omega/omega_c), defined for omega >= 0."""

    if omega < 0.0:
        raise ValueError(f"spectral density is defined for omega >= 0, got {omega!r}")
    return 0.5 * params.alpha * omega * math.exp(-omega / params.omega_c)


def correlation_ft(params: BathParams, omega: float) -> float:
    """Fourier transform c(omega) >= 0 of the bath autocorrelation function."""

    if params.alpha == 0.0:
        return 0.0
    if omega == 0.0:
        if params.temperature > 0.0:
            return math.pi * params.alpha * params.temperature
        if params.c0_effective_temperature is not None:
            return math.pi * params.alpha * params.c0_effective_temperature
        return 0.0

    w = abs(omega)
    if params.temperature == 0.0:
        occupation = 0.0
    else:
        occupation = bose_occupation(w / params.temperature)
    weight = 1.0 + occupation if omega > 0.0 else occupation
    return math.pi * params.alpha * w * weight * math.exp(-w / params.omega_c)


def kms_ratio(params: BathParams, omega: float) -> float:
    """c(-omega)/c(omega), equal to exp(-beta*omega) by detailed balance."""

    if omega == 0.0:
        raise ValueError("kms_ratio is undefined at omega = 0")
    if params.temperature == 0.0:
        if omega > 0.0:
            return 0.0
        raise ValueError("kms_ratio is unbounded for omega < 0 at zero temperature")
    if params.alpha == 0.0:
        # alpha cancels; report the detailed-balance limit
        return math.exp(-omega / params.temperature)
    return correlation_ft(params, -omega) / correlation_ft(params, omega)


def _adaptive_quad(
    func: Callable[[float], float],
    lower: float,
    upper: float,
    cfg: PVQuadratureConfig,
    breakpoints: Sequence[float] = (),
) -> float:
    if upper <= lower:
        return 0.0
    inner = sorted({b for b in breakpoints if lower < b < upper})
    out = quad(
        func,
        lower,
        upper,
        epsabs=cfg.abs_tol,
        epsrel=cfg.rel_tol,
        limit=cfg.max_subdivisions,
        points=inner or None,
        full_output=1,
    )
    if len(out) > 3:
        raise NonConvergenceError(f"quadrature on [{lower:g}, {upper:g}] did not converge: {out[3]}")
    value, abserr = float(out[0]), float(out[1])
    LOGGER.debug("quad [%g, %g] -> %.15g (err %.2e)", lower, upper, value, abserr)
    return value


def cauchy_principal_value(
    func: Callable[[float], float],
    pole: float,
    lower: float,
    upper: float,
    cfg: PVQuadratureConfig,
    breakpoints: Sequence[float] = (),
) -> float:
    """P-integral of func(x)/(x - pole) over [lower, upper].

    The window [pole - h, pole + h] is folded into the regular integral
    of (func(pole + u) - func(pole - u))/u over (0, h]; the two exterior
    pieces are integrated directly. ``breakpoints`` lists kinks of ``func``.
    """

    if not lower < pole < upper:
        raise ValueError(f"pole {pole!r} must lie strictly inside [{lower!r}, {upper!r}]")
    h = min(cfg.interior_halfwidth, pole - lower, upper - pole)

    def folded(u: float) -> float:
        return (func(pole + u) - func(pole - u)) / u

    interior = _adaptive_quad(folded, 0.0, h, cfg, [abs(b - pole) for b in breakpoints])

    def exterior_integrand(x: float) -> float:
        return func(x) / (x - pole)

    left = _adaptive_quad(exterior_integrand, lower, pole - h, cfg, breakpoints)
    right = _adaptive_quad(exterior_integrand, pole + h, upper, cfg, breakpoints)
    return interior + left + right


def hilbert_transform_s(
    params: BathParams,
    omega: float,
    cfg: Optional[PVQuadratureConfig] = None,
) -> float:
    """s(omega) = (P/2pi) integral of c(x)/(x - omega) dx, truncated at |x| <= halfwidth*omega_c."""

    cfg = cfg or PVQuadratureConfig()
    if params.alpha == 0.0:
        return 0.0
    cutoff = cfg.integration_halfwidth * params.omega_c
    if abs(omega) >= cutoff:
        raise ValueError(f"omega {omega!r} lies outside the integration window +/-{cutoff!r}")

    def c(x: float) -> float:
        return correlation_ft(params, x)

    value = cauchy_principal_value(c, omega, -cutoff, cutoff, cfg, breakpoints=(0.0,))
    return value / (2.0 * math.pi)
