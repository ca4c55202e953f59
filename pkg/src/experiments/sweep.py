"""Phase-versus-initial-angle sweeps and their CSV output."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from davies import DaviesGenerator, build_generator
from evolution import IntegratorConfig, evolve, initial_state
from geometric_phase import PhaseResult, PhaseWindow, geometric_phase, spectral_track
from qubit_algebra import DegeneratePhaseError, NumericalError

from .config import ExperimentConfig, config_to_dict

LOGGER = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    "theta",
    "phi",
    "magnitude",
    "degenerate",
    "mu_x",
    "mu_z",
    "alpha",
    "omega_c",
    "temperature",
    "periods",
]


@dataclass(slots=True, frozen=True)
class SweepRecord:
    theta: float
    phi: float
    magnitude: float
    degenerate: bool
    mu_x: float
    mu_z: float
    alpha: float
    omega_c: float
    temperature: float
    periods: float
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(slots=True, frozen=True)
class _PointTask:
    theta: float
    generator: DaviesGenerator
    integrator: IntegratorConfig
    window: PhaseWindow
    echo: Dict[str, float]


def phase_at(
    theta: float,
    generator: DaviesGenerator,
    integrator: IntegratorConfig,
    window: PhaseWindow = PhaseWindow.ZERO_TO_2PI,
) -> PhaseResult:
    """Evolve |theta><theta| and evaluate the geometric phase at the final time."""

    trajectory = evolve(initial_state(theta), generator, integrator)
    return geometric_phase(spectral_track(trajectory), window)


def _run_point(task: _PointTask) -> SweepRecord:
    try:
        result = phase_at(task.theta, task.generator, task.integrator, task.window)
    except NumericalError as exc:
        LOGGER.warning("theta=%.6f failed: %s: %s", task.theta, type(exc).__name__, exc)
        return SweepRecord(
            theta=task.theta,
            phi=math.nan,
            magnitude=math.nan,
            degenerate=isinstance(exc, DegeneratePhaseError),
            error=f"{type(exc).__name__}: {exc}",
            **task.echo,
        )
    return SweepRecord(theta=task.theta, phi=result.phi, magnitude=result.magnitude, degenerate=False, **task.echo)


def _echo(cfg: ExperimentConfig) -> Dict[str, float]:
    return {
        "mu_x": cfg.qubit.mu_x,
        "mu_z": cfg.qubit.mu_z,
        "alpha": cfg.bath.alpha,
        "omega_c": cfg.bath.omega_c,
        "temperature": cfg.bath.temperature,
        "periods": cfg.integrator.periods,
    }


def run_sweep(
    cfg: ExperimentConfig,
    thetas: Optional[Sequence[float]] = None,
    generator: Optional[DaviesGenerator] = None,
) -> List[SweepRecord]:
    """One record per grid angle, sorted by theta.

    The generator is built once and shared; with ``cfg.workers > 1`` points
    are evaluated in a process pool. Numerical failures at single points are
    recorded, not raised.
    """

    grid = cfg.theta_grid.points() if thetas is None else np.asarray(thetas, dtype=float)
    if generator is None:
        generator = build_generator(cfg.qubit, cfg.bath, cfg.quadrature, lamb_shift=cfg.lamb_shift)
    echo = _echo(cfg)
    tasks = [_PointTask(float(t), generator, cfg.integrator, cfg.phase_window, echo) for t in grid]
    total = len(tasks)

    records: List[SweepRecord] = []
    if cfg.workers > 1 and total > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunksize = max(1, total // (4 * cfg.workers))
            for idx, record in enumerate(pool.map(_run_point, tasks, chunksize=chunksize), start=1):
                records.append(record)
                _log_progress(idx, total, record)
    else:
        for idx, task in enumerate(tasks, start=1):
            record = _run_point(task)
            records.append(record)
            _log_progress(idx, total, record)

    failures = sum(r.failed for r in records)
    if failures:
        LOGGER.warning("%d of %d sweep points failed", failures, total)
    return sorted(records, key=lambda r: r.theta)


def _log_progress(idx: int, total: int, record: SweepRecord) -> None:
    if idx == 1 or idx == total or idx % 25 == 0:
        LOGGER.info("[%d/%d] theta=%.6f phi=%.6f", idx, total, record.theta, record.phi)


def records_to_frame(records: Iterable[SweepRecord]) -> pd.DataFrame:
    rows = [asdict(r) for r in records]
    df = pd.DataFrame(rows, columns=SWEEP_COLUMNS + ["error"])
    if df["error"].isna().all():
        df = df.drop(columns=["error"])
    return df


def metadata_line(cfg: ExperimentConfig, extra: Optional[Mapping[str, object]] = None) -> str:
    """``# section.key=value ...`` echo of every parameter, in a fixed order."""

    parts = [
        f"{section}.{key}={value}"
        for section, body in config_to_dict(cfg).items()
        if section != "output"
        for key, value in body.items()
    ]
    parts.extend(f"{key}={value}" for key, value in (extra or {}).items())
    return "# " + " ".join(parts)


def write_sweep_csv(
    records: Sequence[SweepRecord],
    path: Path | str,
    cfg: ExperimentConfig,
    extra_metadata: Optional[Mapping[str, object]] = None,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df = records_to_frame(records)
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write(metadata_line(cfg, extra_metadata) + "\n")
        df.to_csv(f, index=False, float_format="%.15g", na_rep="nan", lineterminator="\n")
    LOGGER.info("Wrote %d sweep rows to %s", len(df), path)
    return path


def read_sweep_csv(path: Path | str) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")
