"""Acceptance checks: analytic anchors, property checks and figure-shape checks.

Every check returns a ``CheckResult`` carrying the measured quantity, the
bound it is held to and the verdict. ``run_validation`` runs them in order,
spread over a process pool when more than one worker is requested.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from bath import BathParams, PVQuadratureConfig, correlation_ft, hilbert_transform_s, kms_ratio
from davies import DaviesGenerator, QubitParams, build_generator, gibbs_state
from evolution import IntegrationMethod, IntegratorConfig, evolve, evolve_exact, initial_state
from geometric_phase import PhaseWindow, free_phase, geometric_phase, phase_representative, spectral_track
from qubit_algebra import NumericalError, trace_distance

from .config import ExperimentConfig, ThetaGrid
from .sweep import phase_at, run_sweep

LOGGER = logging.getLogger(__name__)

GeneratorFactory = Callable[[QubitParams, BathParams], DaviesGenerator]


@dataclass(slots=True, frozen=True)
class CheckResult:
    name: str
    measured: float
    bound: float
    passed: bool
    detail: str = ""


@dataclass(slots=True, frozen=True)
class ValidationSettings:
    """Resolution of the sweep-based checks."""

    sweep_count: int = 200
    workers: int = 1
    steps_per_period: int = 2000
    seed: int = 0


def _at_most(name: str, measured: float, bound: float, detail: str = "") -> CheckResult:
    return CheckResult(name, float(measured), bound, bool(measured <= bound), detail)


def _circular_gap(a: float, b: float) -> float:
    return abs(phase_representative(a - b, PhaseWindow.MINUS_PI_TO_PI))


def _default_bath(temperature: float = 0.0) -> BathParams:
    return BathParams(alpha=1e-2, omega_c=1e2, temperature=temperature)


def _propagator(settings: ValidationSettings, periods: float = 1.0) -> IntegratorConfig:
    """Exact one-step propagation for checks that do not exercise RK4."""

    return IntegratorConfig(
        method=IntegrationMethod.EXACT_EXPM, steps_per_period=settings.steps_per_period, periods=periods
    )


def check_free_phase(settings: ValidationSettings, build: GeneratorFactory = build_generator) -> CheckResult:
    g = build(QubitParams(mu_x=0.0, mu_z=0.0), _default_bath())
    integrator = _propagator(settings)
    worst = max(
        _circular_gap(phase_at(float(theta), g, integrator).phi, free_phase(float(theta)))
        for theta in np.linspace(0.0, math.pi, 50)
    )
    return _at_most("free-phase anchor", worst, 1e-6)


def check_gibbs_stationarity(
    settings: ValidationSettings, build: GeneratorFactory = build_generator
) -> CheckResult:
    q = QubitParams(mu_x=0.3, mu_z=0.0)
    b = _default_bath(temperature=1.0)
    g = build(q, b)
    target = gibbs_state(q, b)
    worst = max(
        trace_distance(evolve_exact(initial_state(theta), g, 1e3 * g.period), target)
        for theta in (0.0, math.pi / 3.0, math.pi)
    )
    return _at_most("Gibbs stationarity", worst, 1e-6, "T=1, t=1000 periods")


def check_kms(settings: ValidationSettings, build: GeneratorFactory = build_generator) -> CheckResult:
    worst = 0.0
    for temperature in (0.25, 1.0, 4.0):
        b = _default_bath(temperature)
        for omega in (0.1, 1.0, 10.0):
            expected = math.exp(-omega / temperature)
            worst = max(worst, abs(kms_ratio(b, omega) - expected) / expected)
    return _at_most("KMS detailed balance", worst, 1e-10)


_INTEGRATOR_CASES = ((0.3, 0.0), (0.0, 0.5), (0.3, 0.5))


def _rk_vs_exact_cases(settings: ValidationSettings, build: GeneratorFactory):
    integrator = IntegratorConfig(steps_per_period=settings.steps_per_period)
    rho0 = initial_state(math.pi / 2.0)
    for mu_x, mu_z in _INTEGRATOR_CASES:
        for temperature in (0.0, 1.0):
            g = build(QubitParams(mu_x=mu_x, mu_z=mu_z), _default_bath(temperature))
            yield evolve(rho0, g, integrator), evolve_exact(rho0, g, g.period)


def check_integrator(settings: ValidationSettings, build: GeneratorFactory = build_generator) -> CheckResult:
    worst = max(
        float(np.max(np.abs(traj.final.matrix - exact.matrix)))
        for traj, exact in _rk_vs_exact_cases(settings, build)
    )
    return _at_most("RK4 vs exact exponential", worst, 1e-8)


def check_gauge_invariance(
    settings: ValidationSettings, build: GeneratorFactory = build_generator
) -> CheckResult:
    g = build(QubitParams(mu_x=0.3), _default_bath())
    traj = evolve(initial_state(math.pi / 2.0), g, IntegratorConfig(steps_per_period=settings.steps_per_period))
    st = spectral_track(traj)
    reference = geometric_phase(st).phi
    rng = np.random.default_rng(settings.seed)
    t = st.times[:, np.newaxis] / st.times[-1]
    worst = 0.0
    for _ in range(100):
        amplitude, frequency, offset, drift = rng.uniform(-3.0, 3.0, size=(4, 2))
        phases = amplitude * np.sin(2.0 * math.pi * frequency * t + offset) + drift * t
        worst = max(worst, _circular_gap(geometric_phase(st.rephased(phases)).phi, reference))
    return _at_most("gauge invariance", worst, 1e-10, "100 random smooth re-phasings")


def check_monitors(settings: ValidationSettings, build: GeneratorFactory = build_generator) -> CheckResult:
    worst = max(traj.max_correction for traj, _ in _rk_vs_exact_cases(settings, build))
    g = build(QubitParams(mu_z=0.5), _default_bath(0.5))
    integrator = IntegratorConfig(steps_per_period=settings.steps_per_period)
    for theta in (0.1, math.pi / 2.0, 3.0):
        worst = max(worst, evolve(initial_state(theta), g, integrator).max_correction)
    return _at_most("trace/Hermiticity corrections", worst, 1e-9)


def check_dephasing_antisymmetry(
    settings: ValidationSettings, build: GeneratorFactory = build_generator
) -> CheckResult:
    g = build(QubitParams(mu_x=0.0, mu_z=0.5), _default_bath(0.5))
    integrator = _propagator(settings)
    worst = 0.0
    for theta in (0.1, 0.3, 0.6, 1.2):
        upper = phase_at(math.pi / 2.0 + theta, g, integrator).phi
        lower = phase_at(math.pi / 2.0 - theta, g, integrator).phi
        worst = max(worst, _circular_gap(upper + lower, 2.0 * math.pi))
    return _at_most("dephasing antisymmetry", worst, 1e-4, "T=0.5, mu_z=0.5")


def _sweep_frame(
    settings: ValidationSettings,
    mu_x: float,
    temperature: float = 0.0,
    periods: float = 1.0,
) -> pd.DataFrame:
    cfg = ExperimentConfig(
        qubit=QubitParams(mu_x=mu_x),
        bath=_default_bath(temperature),
        quadrature=PVQuadratureConfig(),
        integrator=_propagator(settings, periods),
        theta_grid=ThetaGrid(count=settings.sweep_count),
        phase_window=PhaseWindow.MINUS_PI_TO_PI,
        workers=settings.workers,
    )
    records = run_sweep(cfg)
    return pd.DataFrame({"theta": [r.theta for r in records], "phi": [r.phi for r in records]})


def interior_extrema(phi: Sequence[float]) -> tuple[int, int]:
    """Count strict interior local maxima and minima of the unwrapped curve."""

    values = np.unwrap(np.asarray(phi, dtype=float))
    mid, left, right = values[1:-1], values[:-2], values[2:]
    maxima = int(np.sum((mid > left) & (mid > right)))
    minima = int(np.sum((mid < left) & (mid < right)))
    return maxima, minima


def first_order_departure(q: QubitParams, b: BathParams, periods: float = 1.0) -> float:
    """Leading-order max over theta of |Phi(n T) - n Phi_0| for sigma_x coupling at epsilon = 1.

    With emission and absorption rates g_dn = mu_x^2 c(eps), g_up = mu_x^2 c(-eps)
    this is pi^2 n^2 max_z |g_dn f(z) - g_up f(-z)|, z = cos(theta),
    f(z) = (1 + z)(1 - z(1 + z)/2). The Lamb shift enters only at higher order.
    """

    emission = q.mu_x**2 * correlation_ft(b, q.epsilon)
    absorption = q.mu_x**2 * correlation_ft(b, -q.epsilon)
    z = np.linspace(-1.0, 1.0, 2001)

    def profile(x: np.ndarray) -> np.ndarray:
        return (1.0 + x) * (1.0 - 0.5 * x * (1.0 + x))

    return float(math.pi**2 * periods**2 * np.max(np.abs(emission * profile(z) - absorption * profile(-z))))


def _departure_from_free(frame: pd.DataFrame, periods: float = 1.0) -> float:
    free = periods * math.pi * (1.0 + np.cos(frame["theta"].to_numpy()))
    return max(_circular_gap(phi, reference) for phi, reference in zip(frame["phi"], free))


def _failed_points(frame: pd.DataFrame, label: str) -> Optional[CheckResult]:
    failures = int(frame["phi"].isna().sum())
    if failures:
        return CheckResult(f"{label} sweep", float(failures), 0.0, False, "failed points")
    return None


def _shape_checks(
    frame: pd.DataFrame, label: str, q: QubitParams, b: BathParams, periods: float
) -> List[CheckResult]:
    """Monotone unwrapped curve, phi -> 0 at theta -> pi and the size of the departure from n Phi_0."""

    failed = _failed_points(frame, label)
    if failed is not None:
        return [failed]
    maxima, minima = interior_extrema(frame["phi"])
    tail = abs(float(frame["phi"].iloc[-1]))
    departure = _departure_from_free(frame, periods)
    estimate = first_order_departure(q, b, periods)
    mismatch = abs(departure / estimate - 1.0)
    return [
        CheckResult(
            f"{label} extrema",
            float(maxima + minima),
            0.0,
            maxima + minima == 0,
            f"{maxima} max, {minima} min; unwrapped curve is monotone",
        ),
        _at_most(f"{label} phi(theta->pi)", tail, 2e-2, f"theta={frame['theta'].iloc[-1]:.6f}"),
        _at_most(
            f"{label} departure vs estimate",
            mismatch,
            0.05,
            f"departure {departure:.6f}, first-order estimate {estimate:.6f}",
        ),
    ]


def check_fig2_shape(settings: ValidationSettings) -> List[CheckResult]:
    q = QubitParams(mu_x=0.3)
    b = _default_bath()
    results = _shape_checks(_sweep_frame(settings, q.mu_x), "fig2 mu_x=0.3", q, b, 1.0)
    weak = _sweep_frame(settings, 0.05)
    failed = _failed_points(weak, "fig2 mu_x=0.05")
    if failed is not None:
        return results + [failed]
    results.append(_at_most("fig2 mu_x=0.05 vs free", _departure_from_free(weak), 0.15))
    return results


_FIG4_TEMPERATURES = (0.0, 0.5, 1.0)


def check_fig4_trend(settings: ValidationSettings) -> List[CheckResult]:
    """The departure from Phi_0 grows with temperature; near theta = pi the curve stays on Phi_0."""

    results: List[CheckResult] = []
    departures = []
    for temperature in _FIG4_TEMPERATURES:
        frame = _sweep_frame(settings, 0.3, temperature)
        failed = _failed_points(frame, f"fig4 T={temperature:g}")
        if failed is not None:
            return [failed]
        departures.append(_departure_from_free(frame))
    increasing = all(a < b for a, b in zip(departures, departures[1:]))
    results.append(
        CheckResult(
            "fig4 departure grows with T",
            departures[-1],
            departures[0],
            increasing,
            "max |phi - phi_0| at T=" + ",".join(f"{t:g}" for t in _FIG4_TEMPERATURES) + ": "
            + ", ".join(f"{d:.6f}" for d in departures),
        )
    )

    g = build_generator(QubitParams(mu_x=0.3), _default_bath(1.0))
    phi_near_pi = phase_at(3.0, g, _propagator(settings), PhaseWindow.MINUS_PI_TO_PI).phi
    free = math.pi * (1.0 + math.cos(3.0))
    results.append(
        _at_most(
            "fig4 phi(3.0)/phi_0(3.0) at T=1",
            abs(phi_near_pi / free - 1.0),
            0.05,
            f"phi={phi_near_pi:.7f}, phi_0={free:.7f}",
        )
    )
    return results


def check_multi_period(settings: ValidationSettings) -> List[CheckResult]:
    q = QubitParams(mu_x=0.3)
    b = _default_bath()
    results: List[CheckResult] = []
    for periods in (2.0, 3.0):
        frame = _sweep_frame(settings, q.mu_x, periods=periods)
        results.extend(_shape_checks(frame, f"n={periods:g}", q, b, periods))
    return results


def check_pv_anchor(settings: ValidationSettings, build: GeneratorFactory = build_generator) -> CheckResult:
    s0 = hilbert_transform_s(_default_bath(), 0.0)
    return _at_most("PV anchor s(0)=0.5", abs(s0 - 0.5), 1e-8, f"s(0)={s0:.12f}")


CHECKS: Dict[str, Callable[..., object]] = {
    "free-phase": check_free_phase,
    "gibbs": check_gibbs_stationarity,
    "kms": check_kms,
    "integrator": check_integrator,
    "gauge": check_gauge_invariance,
    "monitors": check_monitors,
    "antisymmetry": check_dephasing_antisymmetry,
    "fig2": check_fig2_shape,
    "fig4": check_fig4_trend,
    "multi-period": check_multi_period,
    "pv-anchor": check_pv_anchor,
}


def run_validation(
    settings: Optional[ValidationSettings] = None,
    only: Optional[Iterable[str]] = None,
) -> List[CheckResult]:
    """Run the named checks (all by default). Numerical errors fail the check."""

    settings = settings or ValidationSettings()
    names = list(CHECKS) if only is None else list(only)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}; available: {', '.join(CHECKS)}")
    results: List[CheckResult] = []
    if settings.workers > 1 and len(names) > 1:
        serial = replace(settings, workers=1)
        with ProcessPoolExecutor(max_workers=settings.workers) as pool:
            for outcome in pool.map(_run_check, names, [serial] * len(names)):
                results.extend(outcome)
    else:
        for name in names:
            results.extend(_run_check(name, settings))
    return results


def _run_check(name: str, settings: ValidationSettings) -> List[CheckResult]:
    LOGGER.info("Running check %s", name)
    try:
        outcome = CHECKS[name](settings)
    except NumericalError as exc:
        outcome = CheckResult(name, math.nan, math.nan, False, f"{type(exc).__name__}: {exc}")
    return outcome if isinstance(outcome, list) else [outcome]


def format_report(results: Sequence[CheckResult]) -> str:
    frame = pd.DataFrame(
        {
            "check": [r.name for r in results],
            "measured": [f"{r.measured:.6g}" for r in results],
            "bound": [f"{r.bound:.6g}" for r in results],
            "verdict": ["PASS" if r.passed else "FAIL" for r in results],
            "detail": [r.detail for r in results],
        }
    )
    return frame.to_string(index=False)
