"""Command-line front end.

Usage examples:
  qubit-phase rates --config configs/default.yaml
  qubit-phase sweep --config configs/fig2.yaml --window pmpi --svg --out results/fig2.csv
  qubit-phase figure 4 --out results/ --workers 8
  qubit-phase trajectory --theta 1.5708 --config configs/fig3.yaml --out results/traj.csv
  qubit-phase validate --workers 8

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 validation failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence, Tuple

import pandas as pd

from bath import correlation_ft, hilbert_transform_s
from davies import build_generator
from evolution import evolve, initial_state
from geometric_phase import PhaseResult, geometric_phase, spectral_track
from qubit_algebra import NumericalError

from .config import ConfigError, ExperimentConfig, load_config, with_overrides
from .figures import FIGURES, run_figure
from .plotting import Curve, plot_phase_curves
from .sweep import run_sweep, write_sweep_csv
from .validation import ValidationSettings, format_report, run_validation

LOGGER = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_VALIDATION = 3


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s - %(message)s")


def rates_table(cfg: ExperimentConfig) -> pd.DataFrame:
    """c(+-eps), c(0), s(+-eps), s(0) and c(-eps)/c(eps) for the configured bath."""

    eps = cfg.qubit.epsilon
    b = cfg.bath
    c_plus = correlation_ft(b, eps)
    c_minus = correlation_ft(b, -eps)
    rows = [
        ("c(+eps)", c_plus),
        ("c(-eps)", c_minus),
        ("c(0)", correlation_ft(b, 0.0)),
        ("s(+eps)", hilbert_transform_s(b, eps, cfg.quadrature)),
        ("s(-eps)", hilbert_transform_s(b, -eps, cfg.quadrature)),
        ("s(0)", hilbert_transform_s(b, 0.0, cfg.quadrature)),
        # 0/0 for a decoupled bath is reported as 0
        ("c(-eps)/c(+eps)", c_minus / c_plus if c_plus > 0.0 else 0.0),
    ]
    return pd.DataFrame(rows, columns=["quantity", "value"])


def cmd_rates(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    table = rates_table(cfg)
    print(table.to_string(index=False, float_format=lambda v: f"{v:.12g}"))
    return EXIT_OK


def _svg_path(cfg: ExperimentConfig, csv_path: Path) -> Path:
    return Path(cfg.output.svg_path) if cfg.output.svg_path else csv_path.with_suffix(".svg")


def cmd_sweep(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    csv_path = Path(cfg.output.csv_path or "results/sweep.csv")
    records = run_sweep(cfg)
    write_sweep_csv(records, csv_path, cfg)
    if args.svg or cfg.output.svg_path:
        curve = Curve(
            f"mu_x={cfg.qubit.mu_x:g} mu_z={cfg.qubit.mu_z:g} T={cfg.bath.temperature:g}",
            [r.theta for r in records],
            [r.phi for r in records],
        )
        plot_phase_curves([curve], _svg_path(cfg, csv_path), cfg.phase_window)
    return EXIT_OK


def cmd_figure(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    out_dir = Path(args.out) if args.out else Path("results")
    window = cfg.phase_window if args.window else None
    run = run_figure(args.number, cfg, out_dir, window=window, svg=True)
    LOGGER.info("Figure %d: wrote %d CSV files and %s", run.number, len(run.csv_paths), run.svg_path)
    if run.failures:
        LOGGER.warning("Figure %d: %d points failed; see the error column", run.number, run.failures)
    return EXIT_OK


def trajectory_frame(cfg: ExperimentConfig, theta: float) -> Tuple[pd.DataFrame, PhaseResult]:
    """Bloch components and tracked eigenvalues along one evolution, plus its phase."""

    g = build_generator(cfg.qubit, cfg.bath, cfg.quadrature, lamb_shift=cfg.lamb_shift)
    traj = evolve(initial_state(theta), g, cfg.integrator)
    st = spectral_track(traj)
    bloch = traj.bloch_vectors()
    frame = pd.DataFrame(
        {
            "t": traj.times,
            "r_x": bloch[:, 0],
            "r_y": bloch[:, 1],
            "r_z": bloch[:, 2],
            "p_1": st.p[:, 0],
            "p_2": st.p[:, 1],
            "degenerate": st.degenerate,
        }
    )
    return frame, geometric_phase(st, cfg.phase_window)


def cmd_trajectory(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    frame, result = trajectory_frame(cfg, args.theta)
    out = Path(args.out) if args.out else Path("results/trajectory.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False, float_format="%.15g", lineterminator="\n")
    LOGGER.info("Wrote %d trajectory rows to %s; phi=%.12g magnitude=%.12g", len(frame), out, result.phi, result.magnitude)
    return EXIT_OK


def cmd_validate(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    settings = ValidationSettings(
        sweep_count=cfg.theta_grid.count,
        workers=cfg.workers,
        steps_per_period=cfg.integrator.steps_per_period,
    )
    results = run_validation(settings, only=args.only or None)
    print(format_report(results))
    failed = [r.name for r in results if not r.passed]
    if failed:
        LOGGER.error("%d of %d checks failed: %s", len(failed), len(results), ", ".join(failed))
        return EXIT_VALIDATION
    LOGGER.info("All %d checks passed", len(results))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="YAML experiment config")
    common.add_argument("--periods", type=float, default=None, help="Evaluate the phase at t = n free periods")
    common.add_argument("--window", choices=["zero2pi", "pmpi"], default=None, help="Phase window")
    common.add_argument("--c0-override", type=float, default=None, metavar="T_EFF", help="Use c(0)=pi*alpha*T_eff at T=0")
    common.add_argument("--no-lamb-shift", action="store_true", help="Drop the Lamb-shift Hamiltonian")
    common.add_argument("--svg", action="store_true", help="Also write an SVG plot")
    common.add_argument("--out", type=str, default=None, help="Output CSV path (figure: output directory)")
    common.add_argument("--workers", type=int, default=None, help="Worker processes for sweeps")
    common.add_argument("--verbose", action="store_true", help="Enable debug logging")

    parser = argparse.ArgumentParser(
        prog="qubit-phase",
        description="Geometric phase of a qubit under Davies dynamics in an Ohmic bath",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("rates", parents=[common], help="Print bath rates and Lamb-shift coefficients").set_defaults(
        handler=cmd_rates
    )
    sub.add_parser("sweep", parents=[common], help="Phase versus initial polar angle").set_defaults(handler=cmd_sweep)
    fig = sub.add_parser("figure", parents=[common], help="Run a preconfigured figure family")
    fig.add_argument("number", type=int, choices=FIGURES)
    fig.set_defaults(handler=cmd_figure)
    traj = sub.add_parser("trajectory", parents=[common], help="Write one trajectory's Bloch and eigenvalue tracks")
    traj.add_argument("--theta", type=float, required=True, help="Initial polar angle in [0, pi]")
    traj.set_defaults(handler=cmd_trajectory)
    val = sub.add_parser("validate", parents=[common], help="Run the acceptance checks")
    val.add_argument("--only", action="append", default=None, help="Run only the named check (repeatable)")
    val.set_defaults(handler=cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        cfg = load_config(args.config)
        cfg = with_overrides(
            cfg,
            periods=args.periods,
            window=args.window,
            c0_override=args.c0_override,
            no_lamb_shift=args.no_lamb_shift,
            csv_path=args.out if args.command != "figure" else None,
            workers=args.workers,
        )
        return args.handler(cfg, args)
    except (ConfigError, ImportError) as exc:
        LOGGER.error("%s", exc)
        return EXIT_CONFIG
    except NumericalError as exc:
        LOGGER.error("numerical failure: %s: %s", type(exc).__name__, exc)
        return EXIT_NUMERICAL
    except ValueError as exc:
        LOGGER.error("invalid input: %s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
