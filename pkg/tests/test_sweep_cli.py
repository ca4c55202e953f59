import math

import numpy as np
import pandas as pd
import pytest

from experiments import cli
from experiments import sweep as sweep_module
from experiments.config import ExperimentConfig, parse_config
from experiments.figures import figure_family, run_figure
from experiments.sweep import SWEEP_COLUMNS, read_sweep_csv, records_to_frame, run_sweep, write_sweep_csv
from geometric_phase import PhaseWindow, free_phase
from qubit_algebra import DegeneratePhaseError, NonConvergenceError


def small_config(**sections) -> ExperimentConfig:
    raw = {
        "integrator": {"steps_per_period": 400},
        "sweep": {"count": 4},
    }
    for section, body in sections.items():
        raw[section] = {**raw.get(section, {}), **body}
    return parse_config(raw)


def write_yaml(tmp_path, text: str):
    path = tmp_path / "experiment.yaml"
    path.write_text(text, encoding="utf-8")
    return path


def test_free_sweep_reproduces_closed_form():
    records = run_sweep(small_config())
    assert [r.theta for r in records] == sorted(r.theta for r in records)
    assert len(records) == 4
    for r in records:
        assert not r.failed
        gap = abs((r.phi - free_phase(r.theta) + math.pi) % (2.0 * math.pi) - math.pi)
        assert gap < 1e-4
        assert 0.0 <= r.phi < 2.0 * math.pi


def test_sweep_csv_layout_and_stability(tmp_path):
    cfg = small_config(qubit={"mu_x": 0.3})
    records = run_sweep(cfg)
    first = write_sweep_csv(records, tmp_path / "a.csv", cfg)
    second = write_sweep_csv(run_sweep(cfg), tmp_path / "b.csv", cfg)
    assert first.read_bytes() == second.read_bytes()

    lines = first.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# ")
    assert "qubit.mu_x=0.3" in lines[0]
    assert lines[1] == ",".join(SWEEP_COLUMNS)
    df = read_sweep_csv(first)
    assert list(df.columns) == SWEEP_COLUMNS
    assert len(df) == 4
    assert np.allclose(df["theta"], [r.theta for r in records], rtol=0, atol=1e-14)


def test_parallel_sweep_matches_serial(tmp_path):
    serial_cfg = small_config(qubit={"mu_x": 0.3})
    parallel_cfg = small_config(qubit={"mu_x": 0.3}, sweep={"workers": 2})
    serial = write_sweep_csv(run_sweep(serial_cfg), tmp_path / "serial.csv", serial_cfg)
    parallel = write_sweep_csv(run_sweep(parallel_cfg), tmp_path / "parallel.csv", serial_cfg)
    assert serial.read_bytes() == parallel.read_bytes()


def test_point_failures_are_recorded(monkeypatch, tmp_path):
    real_phase_at = sweep_module.phase_at

    def flaky_phase_at(theta, *args, **kwargs):
        if theta > 2.0:
            raise DegeneratePhaseError("branch passes through a degeneracy")
        return real_phase_at(theta, *args, **kwargs)

    monkeypatch.setattr(sweep_module, "phase_at", flaky_phase_at)
    cfg = small_config()
    records = run_sweep(cfg)
    failed = [r for r in records if r.failed]
    assert len(failed) == 1
    assert failed[0].degenerate
    assert math.isnan(failed[0].phi)

    df = read_sweep_csv(write_sweep_csv(records, tmp_path / "errors.csv", cfg))
    assert list(df.columns) == SWEEP_COLUMNS + ["error"]
    assert df["error"].notna().sum() == 1
    assert "DegeneratePhaseError" in df["error"].dropna().iloc[0]


def test_records_frame_has_no_error_column_without_failures():
    frame = records_to_frame(run_sweep(small_config(sweep={"count": 2})))
    assert list(frame.columns) == SWEEP_COLUMNS


def test_figure_families():
    base = ExperimentConfig()
    fig1 = figure_family(1, base)
    assert [c.config.qubit.mu_z for c in fig1] == [0.1, 0.5, 1.0, 1.5]
    assert all(c.config.qubit.mu_x == 0.0 for c in fig1)
    assert all(c.config.phase_window is PhaseWindow.ZERO_TO_2PI for c in fig1)
    assert fig1[0].metadata["c0_convention"] == "strict"

    fig2 = figure_family(2, base)
    assert [c.config.qubit.mu_x for c in fig2] == [0.05, 0.3, 0.4]
    assert all(c.config.phase_window is PhaseWindow.MINUS_PI_TO_PI for c in fig2)

    fig3 = figure_family(3, base)
    assert [(c.config.qubit.mu_x, c.config.qubit.mu_z) for c in fig3] == [(0.3, 0.1), (0.3, 0.3), (0.3, 0.5), (0.3, 1.0)]

    fig4 = figure_family(4, base)
    assert [c.config.bath.temperature for c in fig4] == [0.0, 0.5, 1.0, 2.0]

    with pytest.raises(ValueError):
        figure_family(5, base)


def test_figure_one_records_c0_override():
    base = parse_config({"bath": {"c0_effective_temperature": 0.1}})
    assert figure_family(1, base)[0].metadata["c0_convention"] == "override(T_eff=0.1)"


def test_cli_rates_table(tmp_path, capsys):
    assert cli.main(["rates"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "c(+eps)" in out
    table = cli.rates_table(ExperimentConfig())
    values = dict(zip(table["quantity"], table["value"]))
    assert values["c(+eps)"] == pytest.approx(0.031102, rel=1e-4)
    assert values["c(-eps)"] == 0.0
    assert values["s(0)"] == pytest.approx(0.5, abs=1e-8)


def test_cli_rates_without_coupling_is_all_zero(tmp_path):
    cfg = parse_config({"bath": {"alpha": 0.0, "temperature": 1.0}})
    assert (cli.rates_table(cfg)["value"] == 0.0).all()


def test_cli_sweep_writes_csv(tmp_path):
    config = write_yaml(tmp_path, "integrator:\n  steps_per_period: 200\nsweep:\n  count: 3\n")
    out = tmp_path / "sweep.csv"
    assert cli.main(["sweep", "--config", str(config), "--out", str(out), "--window", "pmpi"]) == cli.EXIT_OK
    df = pd.read_csv(out, comment="#")
    assert len(df) == 3
    assert (df["phi"] > -math.pi).all() and (df["phi"] <= math.pi).all()


def test_cli_config_errors_exit_with_one(tmp_path):
    bad = write_yaml(tmp_path, "qubit:\n  mu_y: 0.3\n")
    assert cli.main(["sweep", "--config", str(bad)]) == cli.EXIT_CONFIG
    assert cli.main(["rates", "--config", str(tmp_path / "missing.yaml")]) == cli.EXIT_CONFIG


def test_cli_numerical_failure_exits_with_two(monkeypatch, tmp_path):
    def failing_sweep(cfg):
        raise NonConvergenceError("quadrature did not converge")

    monkeypatch.setattr(cli, "run_sweep", failing_sweep)
    assert cli.main(["sweep", "--out", str(tmp_path / "x.csv")]) == cli.EXIT_NUMERICAL


def test_cli_trajectory(tmp_path):
    config = write_yaml(tmp_path, "qubit:\n  mu_x: 0.3\nintegrator:\n  steps_per_period: 200\n")
    out = tmp_path / "traj.csv"
    assert cli.main(["trajectory", "--theta", "1.0", "--config", str(config), "--out", str(out)]) == cli.EXIT_OK
    df = pd.read_csv(out)
    assert list(df.columns) == ["t", "r_x", "r_y", "r_z", "p_1", "p_2", "degenerate"]
    assert len(df) == 201
    assert np.allclose(df["p_1"] + df["p_2"], 1.0)


def test_cli_validate_subset(capsys):
    assert cli.main(["validate", "--only", "kms", "--only", "pv-anchor"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_cli_non_finite_config_value_exits_with_one(tmp_path):
    bad = write_yaml(tmp_path, "integrator:\n  steps_per_period: .inf\n")
    assert cli.main(["sweep", "--config", str(bad), "--out", str(tmp_path / "x.csv")]) == cli.EXIT_CONFIG


def test_run_figure_writes_one_csv_per_curve(tmp_path):
    run = run_figure(1, small_config(), tmp_path, svg=False)
    assert [p.name for p in run.csv_paths] == [
        "fig1_mu_z0p1.csv",
        "fig1_mu_z0p5.csv",
        "fig1_mu_z1.csv",
        "fig1_mu_z1p5.csv",
    ]
    assert run.svg_path is None
    assert run.failures == 0
    for path in run.csv_paths:
        header = path.read_text(encoding="utf-8").splitlines()[0]
        assert "figure=1" in header
        assert "c0_convention=strict" in header
        assert len(read_sweep_csv(path)) == 4


def test_run_figure_svg_is_byte_stable(tmp_path):
    pytest.importorskip("matplotlib")
    cfg = small_config(sweep={"count": 3})
    first = run_figure(2, cfg, tmp_path / "a")
    second = run_figure(2, cfg, tmp_path / "b")
    assert first.svg_path.name == "fig2.svg"
    svg = first.svg_path.read_bytes()
    assert svg.lstrip().startswith(b"<?xml")
    assert svg == second.svg_path.read_bytes()


def test_cli_figure_writes_family(tmp_path):
    pytest.importorskip("matplotlib")
    config = write_yaml(tmp_path, "integrator:\n  steps_per_period: 200\nsweep:\n  count: 3\n")
    out_dir = tmp_path / "figures"
    assert cli.main(["figure", "2", "--config", str(config), "--out", str(out_dir)]) == cli.EXIT_OK
    assert sorted(p.name for p in out_dir.iterdir()) == [
        "fig2.svg",
        "fig2_mu_x0p05.csv",
        "fig2_mu_x0p3.csv",
        "fig2_mu_x0p4.csv",
    ]
    df = read_sweep_csv(out_dir / "fig2_mu_x0p3.csv")
    assert (df["mu_x"] == 0.3).all()
    assert (df["phi"] > -math.pi).all() and (df["phi"] <= math.pi).all()


def test_cli_sweep_svg(tmp_path):
    pytest.importorskip("matplotlib")
    config = write_yaml(tmp_path, "qubit:\n  mu_x: 0.3\nintegrator:\n  steps_per_period: 200\nsweep:\n  count: 3\n")
    out = tmp_path / "sweep.csv"
    assert cli.main(["sweep", "--config", str(config), "--out", str(out), "--svg"]) == cli.EXIT_OK
    svg = out.with_suffix(".svg")
    assert svg.exists()
    assert b"<svg" in svg.read_bytes()
