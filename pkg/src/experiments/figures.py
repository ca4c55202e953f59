"""Preconfigured multi-curve sweep families for the four phase figures.

1: dephasing only (mu_x = 0), mu_z in {0.1, 0.5, 1.0, 1.5}, window [0, 2pi)
2: dissipation only, mu_x in {0.05, 0.3, 0.4}
3: mu_x = 0.3 with mu_z in {0.1, 0.3, 0.5, 1.0}
4: mu_x = 0.3, mu_z = 0, temperature in {0, 0.5, 1, 2}
Figures 2-4 use the (-pi, pi] window. Bath cutoff, coupling strength,
quadrature, integrator and grid come from the base config.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from davies import QubitParams
from geometric_phase import PhaseWindow

from .config import ExperimentConfig
from .plotting import Curve, plot_phase_curves
from .sweep import SweepRecord, run_sweep, write_sweep_csv

LOGGER = logging.getLogger(__name__)

FIGURES = (1, 2, 3, 4)


@dataclass(slots=True, frozen=True)
class FigureCurve:
    label: str
    config: ExperimentConfig
    metadata: Dict[str, str] = field(default_factory=dict)


@dataclass(slots=True)
class FigureRun:
    number: int
    csv_paths: List[Path] = field(default_factory=list)
    svg_path: Optional[Path] = None
    curves: Dict[str, List[SweepRecord]] = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return sum(r.failed for records in self.curves.values() for r in records)


def _with_qubit(cfg: ExperimentConfig, mu_x: float, mu_z: float) -> ExperimentConfig:
    return replace(cfg, qubit=QubitParams(epsilon=cfg.qubit.epsilon, mu_x=mu_x, mu_z=mu_z))


def _c0_convention(cfg: ExperimentConfig) -> str:
    if cfg.bath.temperature > 0.0:
        return "thermal"
    if cfg.bath.c0_override_active:
        return f"override(T_eff={cfg.bath.c0_effective_temperature:g})"
    return "strict"


def figure_family(
    number: int,
    base: ExperimentConfig,
    window: Optional[PhaseWindow] = None,
) -> List[FigureCurve]:
    """Curves of figure ``number``; ``window`` replaces the figure's own window."""

    if number not in FIGURES:
        raise ValueError(f"figure number must be one of {FIGURES}, got {number!r}")
    default_window = PhaseWindow.ZERO_TO_2PI if number == 1 else PhaseWindow.MINUS_PI_TO_PI
    base = replace(base, phase_window=window or default_window)

    curves: List[FigureCurve] = []
    if number == 1:
        for mu_z in (0.1, 0.5, 1.0, 1.5):
            cfg = _with_qubit(base, 0.0, mu_z)
            curves.append(FigureCurve(f"mu_z={mu_z:g}", cfg, {"c0_convention": _c0_convention(cfg)}))
        if base.bath.temperature == 0.0 and not base.bath.c0_override_active:
            LOGGER.warning(
                "Figure 1 at T=0 with c(0)=0: the dephasing dissipator vanishes and every curve "
                "equals the free phase; pass --c0-override T_eff to use c(0)=pi*alpha*T_eff"
            )
    elif number == 2:
        for mu_x in (0.05, 0.3, 0.4):
            curves.append(FigureCurve(f"mu_x={mu_x:g}", _with_qubit(base, mu_x, 0.0)))
    elif number == 3:
        for mu_z in (0.1, 0.3, 0.5, 1.0):
            curves.append(FigureCurve(f"mu_z={mu_z:g}", _with_qubit(base, 0.3, mu_z)))
    else:
        for temperature in (0.0, 0.5, 1.0, 2.0):
            cfg = _with_qubit(base, 0.3, 0.0)
            cfg = replace(cfg, bath=replace(cfg.bath, temperature=temperature))
            curves.append(FigureCurve(f"T={temperature:g}", cfg))
    return curves


def _slug(label: str) -> str:
    return label.replace("=", "").replace(".", "p")


def run_figure(
    number: int,
    base: ExperimentConfig,
    out_dir: Path | str,
    *,
    window: Optional[PhaseWindow] = None,
    svg: bool = True,
) -> FigureRun:
    """Sweep every curve, write one CSV per curve and a combined SVG."""

    out_dir = Path(out_dir)
    run = FigureRun(number=number)
    family = figure_family(number, base, window)
    for idx, curve in enumerate(family, start=1):
        LOGGER.info("Figure %d curve %d/%d: %s", number, idx, len(family), curve.label)
        records = run_sweep(curve.config)
        run.curves[curve.label] = records
        metadata = {"figure": number, "curve": curve.label, **curve.metadata}
        run.csv_paths.append(write_sweep_csv(records, out_dir / f"fig{number}_{_slug(curve.label)}.csv", curve.config, metadata))

    if svg:
        plotted = [
            Curve(label, np.array([r.theta for r in records]), np.array([r.phi for r in records]))
            for label, records in run.curves.items()
        ]
        run.svg_path = plot_phase_curves(
            plotted, out_dir / f"fig{number}.svg", family[0].config.phase_window, title=f"Figure {number}"
        )
    return run
