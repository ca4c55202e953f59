"""Experiment configuration, sweeps, figures, validation and the command-line interface."""

from .config import (
    DEFAULTS,
    ConfigError,
    ExperimentConfig,
    OutputConfig,
    ThetaGrid,
    config_to_dict,
    dump_config,
    load_config,
    parse_config,
    with_overrides,
)
from .figures import FIGURES, FigureCurve, FigureRun, figure_family, run_figure
from .sweep import (
    SWEEP_COLUMNS,
    SweepRecord,
    phase_at,
    read_sweep_csv,
    records_to_frame,
    run_sweep,
    write_sweep_csv,
)
from .validation import CHECKS, CheckResult, ValidationSettings, format_report, run_validation

__all__ = [
    "DEFAULTS",
    "ConfigError",
    "ExperimentConfig",
    "OutputConfig",
    "ThetaGrid",
    "config_to_dict",
    "dump_config",
    "load_config",
    "parse_config",
    "with_overrides",
    "FIGURES",
    "FigureCurve",
    "FigureRun",
    "figure_family",
    "run_figure",
    "SWEEP_COLUMNS",
    "SweepRecord",
    "phase_at",
    "read_sweep_csv",
    "records_to_frame",
    "run_sweep",
    "write_sweep_csv",
    "CHECKS",
    "CheckResult",
    "ValidationSettings",
    "format_report",
    "run_validation",
]
