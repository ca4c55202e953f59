"""YAML experiment configuration.

A config file has up to six sections; every key is optional and falls back to
``DEFAULTS`` through a nested merge::

    qubit:      {epsilon, mu_x, mu_z}
    bath:       {alpha, omega_c, temperature, c0_effective_temperature, lamb_shift}
    quadrature: {integration_halfwidth, interior_halfwidth, rel_tol, abs_tol, max_subdivisions}
    integrator: {method, steps_per_period, periods}
    sweep:      {count, min, max, window, workers}
    output:     {csv_path, svg_path}
"""

from __future__ import annotations

import copy
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import numpy as np
import yaml

from bath import BathParams, PVQuadratureConfig
from davies import QubitParams
from evolution import IntegratorConfig
from geometric_phase import PhaseWindow

LOGGER = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Raised for unreadable, unknown or out-of-range configuration values."""


DEFAULTS: Dict[str, Dict[str, Any]] = {
    "qubit": {"epsilon": 1.0, "mu_x": 0.0, "mu_z": 0.0},
    "bath": {
        "alpha": 1e-2,
        "omega_c": 1e2,
        "temperature": 0.0,
        "c0_effective_temperature": None,
        "lamb_shift": True,
    },
    "quadrature": {
        "integration_halfwidth": 40.0,
        "interior_halfwidth": 1.0,
        "rel_tol": 1e-10,
        "abs_tol": 1e-14,
        "max_subdivisions": 500,
    },
    "integrator": {"method": "rk4", "steps_per_period": 2000, "periods": 1.0},
    "sweep": {"count": 200, "min": None, "max": None, "window": "zero_to_2pi", "workers": 1},
    "output": {"csv_path": "results/sweep.csv", "svg_path": None},
}

_FLOAT, _INT, _BOOL, _STR = "float", "int", "bool", "str"
_SCHEMA: Dict[str, Dict[str, tuple[str, bool]]] = {
    # key -> (kind, nullable)
    "qubit": {"epsilon": (_FLOAT, False), "mu_x": (_FLOAT, False), "mu_z": (_FLOAT, False)},
    "bath": {
        "alpha": (_FLOAT, False),
        "omega_c": (_FLOAT, False),
        "temperature": (_FLOAT, False),
        "c0_effective_temperature": (_FLOAT, True),
        "lamb_shift": (_BOOL, False),
    },
    "quadrature": {
        "integration_halfwidth": (_FLOAT, False),
        "interior_halfwidth": (_FLOAT, False),
        "rel_tol": (_FLOAT, False),
        "abs_tol": (_FLOAT, False),
        "max_subdivisions": (_INT, False),
    },
    "integrator": {"method": (_STR, False), "steps_per_period": (_INT, False), "periods": (_FLOAT, False)},
    "sweep": {
        "count": (_INT, False),
        "min": (_FLOAT, True),
        "max": (_FLOAT, True),
        "window": (_STR, False),
        "workers": (_INT, False),
    },
    "output": {"csv_path": (_STR, True), "svg_path": (_STR, True)},
}


@dataclass(slots=True, frozen=True)
class ThetaGrid:
    """Initial polar angles of a sweep.

    Without explicit bounds the grid holds the ``count`` midpoints
    (k + 1/2) pi / count, which keeps the stationary poles 0 and pi out.
    """

    count: int = 200
    min: Optional[float] = None
    max: Optional[float] = None

    def __post_init__(self) -> None:
        if self.count < 2:
            raise ValueError(f"count must be >= 2, got {self.count!r}")
        if (self.min is None) != (self.max is None):
            raise ValueError("min and max must be given together")
        if self.min is not None:
            if not 0.0 <= self.min < self.max <= math.pi:
                raise ValueError(f"theta range [{self.min!r}, {self.max!r}] must satisfy 0 <= min < max <= pi")

    def points(self) -> np.ndarray:
        if self.min is None:
            return (np.arange(self.count) + 0.5) * (math.pi / self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(slots=True, frozen=True)
class OutputConfig:
    csv_path: Optional[str] = "results/sweep.csv"
    svg_path: Optional[str] = None


@dataclass(slots=True, frozen=True)
class ExperimentConfig:
    qubit: QubitParams = field(default_factory=QubitParams)
    bath: BathParams = field(default_factory=BathParams)
    quadrature: PVQuadratureConfig = field(default_factory=PVQuadratureConfig)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    theta_grid: ThetaGrid = field(default_factory=ThetaGrid)
    phase_window: PhaseWindow = PhaseWindow.ZERO_TO_2PI
    lamb_shift: bool = True
    workers: int = 1
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers!r}")


def _merge_nested(base: Dict, override: Mapping) -> Dict:
    out = dict(base)
    for k, v in (override or {}).items():
        if isinstance(v, Mapping) and isinstance(out.get(k), dict):
            out[k] = _merge_nested(out[k], v)
        else:
            out[k] = v
    return out


def _coerce(section: str, key: str, value: Any) -> Any:
    kind, nullable = _SCHEMA[section][key]
    where = f"{section}.{key}"
    if value is None:
        if nullable:
            return None
        raise ConfigError(f"{where}: a value is required")
    if kind == _BOOL:
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected true/false, got {value!r}")
        return value
    if kind == _STR:
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    if isinstance(value, str) and kind == _FLOAT:
        # YAML 1.1 reads exponent literals such as 1e-2 as strings
        try:
            value = float(value)
        except ValueError:
            raise ConfigError(f"{where}: expected a number, got {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigError(f"{where}: expected a finite number, got {value!r}")
    if kind == _INT:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return int(value)
    try:
        return float(value)
    except OverflowError:
        raise ConfigError(f"{where}: expected a finite number, got {value!r}") from None


def _validated_sections(raw: Mapping) -> Dict[str, Dict[str, Any]]:
    if not isinstance(raw, Mapping):
        raise ConfigError(f"config must be a mapping of sections, got {type(raw).__name__}")
    for section, body in raw.items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section {section!r}; expected one of {', '.join(_SCHEMA)}")
        if body is None:
            continue
        if not isinstance(body, Mapping):
            raise ConfigError(f"{section}: expected a mapping, got {body!r}")
        for key in body:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {section}.{key}")
    merged = _merge_nested(copy.deepcopy(DEFAULTS), {k: v for k, v in raw.items() if v is not None})
    return {
        section: {key: _coerce(section, key, value) for key, value in body.items()}
        for section, body in merged.items()
    }


def _build(section: str, factory, **kwargs):
    try:
        return factory(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{section}: {exc}") from exc


def parse_config(raw: Optional[Mapping]) -> ExperimentConfig:
    """Validate a section mapping (as loaded from YAML) into an ExperimentConfig."""

    s = _validated_sections(raw or {})
    bath_section = dict(s["bath"])
    lamb_shift = bath_section.pop("lamb_shift")
    sweep = s["sweep"]
    try:
        window = PhaseWindow.parse(sweep["window"])
    except ValueError as exc:
        raise ConfigError(f"sweep.window: {exc}") from exc
    return _build(
        "sweep",
        ExperimentConfig,
        qubit=_build("qubit", QubitParams, **s["qubit"]),
        bath=_build("bath", BathParams, **bath_section),
        quadrature=_build("quadrature", PVQuadratureConfig, **s["quadrature"]),
        integrator=_build("integrator", IntegratorConfig, **s["integrator"]),
        theta_grid=_build("sweep", ThetaGrid, count=sweep["count"], min=sweep["min"], max=sweep["max"]),
        phase_window=window,
        lamb_shift=lamb_shift,
        workers=sweep["workers"],
        output=_build("output", OutputConfig, **s["output"]),
    )


def config_to_dict(cfg: ExperimentConfig) -> Dict[str, Dict[str, Any]]:
    """Plain section mapping; ``parse_config(config_to_dict(cfg)) == cfg``."""

    return {
        "qubit": {"epsilon": cfg.qubit.epsilon, "mu_x": cfg.qubit.mu_x, "mu_z": cfg.qubit.mu_z},
        "bath": {
            "alpha": cfg.bath.alpha,
            "omega_c": cfg.bath.omega_c,
            "temperature": cfg.bath.temperature,
            "c0_effective_temperature": cfg.bath.c0_effective_temperature,
            "lamb_shift": cfg.lamb_shift,
        },
        "quadrature": {
            "integration_halfwidth": cfg.quadrature.integration_halfwidth,
            "interior_halfwidth": cfg.quadrature.interior_halfwidth,
            "rel_tol": cfg.quadrature.rel_tol,
            "abs_tol": cfg.quadrature.abs_tol,
            "max_subdivisions": cfg.quadrature.max_subdivisions,
        },
        "integrator": {
            "method": cfg.integrator.method.value,
            "steps_per_period": cfg.integrator.steps_per_period,
            "periods": cfg.integrator.periods,
        },
        "sweep": {
            "count": cfg.theta_grid.count,
            "min": cfg.theta_grid.min,
            "max": cfg.theta_grid.max,
            "window": cfg.phase_window.value,
            "workers": cfg.workers,
        },
        "output": {"csv_path": cfg.output.csv_path, "svg_path": cfg.output.svg_path},
    }


def dump_config(cfg: ExperimentConfig) -> str:
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False)


def load_config(path: Optional[Path | str]) -> ExperimentConfig:
    """Read a YAML config; ``None`` gives the defaults."""

    if path is None:
        return parse_config({})
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with path.open("r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = f" line {mark.line + 1}" if mark is not None else ""
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigError(f"{path}:{line}: invalid YAML: {problem}") from exc
    LOGGER.debug("Loaded config from %s", path)
    return parse_config(raw)


def with_overrides(
    cfg: ExperimentConfig,
    *,
    periods: Optional[float] = None,
    window: Optional[str] = None,
    c0_override: Optional[float] = None,
    no_lamb_shift: bool = False,
    csv_path: Optional[str] = None,
    svg_path: Optional[str] = None,
    workers: Optional[int] = None,
) -> ExperimentConfig:
    """Apply command-line flags on top of a parsed config."""

    try:
        if periods is not None:
            cfg = replace(cfg, integrator=replace(cfg.integrator, periods=float(periods)))
        if window is not None:
            cfg = replace(cfg, phase_window=PhaseWindow.parse(window))
        if c0_override is not None:
            cfg = replace(cfg, bath=replace(cfg.bath, c0_effective_temperature=float(c0_override)))
        if no_lamb_shift:
            cfg = replace(cfg, lamb_shift=False)
        if csv_path is not None or svg_path is not None:
            cfg = replace(
                cfg,
                output=OutputConfig(
                    csv_path=csv_path if csv_path is not None else cfg.output.csv_path,
                    svg_path=svg_path if svg_path is not None else cfg.output.svg_path,
                ),
            )
        if workers is not None:
            cfg = replace(cfg, workers=int(workers))
    except ValueError as exc:
        raise ConfigError(f"command-line override: {exc}") from exc
    return cfg
