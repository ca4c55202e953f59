import math
from dataclasses import replace

import numpy as np
import pytest

from bath import (
    BathParams,
    PVQuadratureConfig,
    bose_occupation,
    cauchy_principal_value,
    correlation_ft,
    hilbert_transform_s,
    kms_ratio,
    spectral_density,
)

FIG1_BATH = BathParams(alpha=1e-2, omega_c=1e2, temperature=0.0)


def test_correlation_at_zero_temperature():
    assert correlation_ft(FIG1_BATH, 1.0) == pytest.approx(math.pi * 1e-2 * math.exp(-1e-2), rel=1e-14)
    assert correlation_ft(FIG1_BATH, 1.0) == pytest.approx(0.031102, rel=1e-4)
    assert correlation_ft(FIG1_BATH, -1.0) == 0.0
    assert correlation_ft(FIG1_BATH, 0.0) == 0.0


def test_correlation_at_zero_frequency_finite_temperature():
    b = BathParams(alpha=1e-2, omega_c=1e2, temperature=0.5)
    assert correlation_ft(b, 0.0) == pytest.approx(math.pi * 1e-2 * 0.5)
    # continuous across omega = 0
    assert correlation_ft(b, 1e-7) == pytest.approx(correlation_ft(b, 0.0), rel=1e-6)


def test_c0_override_only_applies_at_zero_temperature():
    b = BathParams(alpha=1e-2, omega_c=1e2, temperature=0.0, c0_effective_temperature=0.1)
    assert b.c0_override_active
    assert correlation_ft(b, 0.0) == pytest.approx(math.pi * 1e-2 * 0.1)
    warm = BathParams(alpha=1e-2, omega_c=1e2, temperature=1.0, c0_effective_temperature=0.1)
    assert not warm.c0_override_active
    assert correlation_ft(warm, 0.0) == pytest.approx(math.pi * 1e-2)


def test_correlation_matches_coth_form():
    b = BathParams(alpha=0.02, omega_c=5.0, temperature=0.7)
    for omega in (-3.0, -0.4, 0.4, 3.0):
        w = abs(omega)
        coth = 1.0 / math.tanh(w / (2.0 * b.temperature))
        expected = 0.5 * math.pi * b.alpha * (w * coth + omega) * math.exp(-w / b.omega_c)
        assert correlation_ft(b, omega) == pytest.approx(expected, rel=1e-12)


def test_zero_coupling_gives_zero_spectrum():
    b = BathParams(alpha=0.0, omega_c=1e2, temperature=1.0)
    assert correlation_ft(b, 1.0) == 0.0
    assert correlation_ft(b, 0.0) == 0.0
    assert hilbert_transform_s(b, 1.0) == 0.0


@pytest.mark.parametrize("temperature", [0.25, 1.0, 4.0])
@pytest.mark.parametrize("omega", [0.1, 1.0, 10.0])
def test_kms_detailed_balance(temperature, omega):
    b = BathParams(alpha=1e-2, omega_c=1e2, temperature=temperature)
    expected = math.exp(-omega / temperature)
    assert kms_ratio(b, omega) == pytest.approx(expected, rel=1e-10)


def test_kms_ratio_edge_cases():
    assert kms_ratio(FIG1_BATH, 1.0) == 0.0
    with pytest.raises(ValueError):
        kms_ratio(FIG1_BATH, -1.0)
    with pytest.raises(ValueError):
        kms_ratio(BathParams(temperature=1.0), 0.0)


def test_bose_occupation_large_argument_does_not_overflow():
    assert bose_occupation(800.0) == pytest.approx(math.exp(-800.0))
    assert bose_occupation(1.0) == pytest.approx(1.0 / (math.e - 1.0))


def test_spectral_density():
    assert spectral_density(FIG1_BATH, 0.0) == 0.0
    assert spectral_density(FIG1_BATH, 2.0) == pytest.approx(0.5 * 1e-2 * 2.0 * math.exp(-2e-2))
    with pytest.raises(ValueError):
        spectral_density(FIG1_BATH, -1.0)


def test_bath_params_validation():
    with pytest.raises(ValueError):
        BathParams(alpha=-1.0)
    with pytest.raises(ValueError):
        BathParams(omega_c=0.0)
    with pytest.raises(ValueError):
        BathParams(temperature=-0.1)


def test_principal_value_of_polynomial():
    cfg = PVQuadratureConfig()
    # P int_0^3 x^2/(x-1) dx = 7.5 + ln 2
    value = cauchy_principal_value(lambda x: x * x, 1.0, 0.0, 3.0, cfg)
    assert value == pytest.approx(7.5 + math.log(2.0), rel=1e-10)
    assert cauchy_principal_value(lambda x: x * x, 1.0, 0.0, 2.0, cfg) == pytest.approx(4.0, rel=1e-10)


def test_principal_value_rejects_pole_outside_interval():
    with pytest.raises(ValueError):
        cauchy_principal_value(lambda x: x, 2.0, 0.0, 1.0, PVQuadratureConfig())


def test_lamb_coefficient_at_zero_frequency_anchor():
    # zero temperature: s(0) = alpha * omega_c / 2
    assert hilbert_transform_s(FIG1_BATH, 0.0) == pytest.approx(0.5, abs=1e-8)


def test_lamb_coefficient_is_stable_under_wider_truncation():
    narrow = hilbert_transform_s(FIG1_BATH, 1.0, PVQuadratureConfig(integration_halfwidth=40.0))
    wide = hilbert_transform_s(FIG1_BATH, 1.0, PVQuadratureConfig(integration_halfwidth=80.0))
    assert wide == pytest.approx(narrow, rel=1e-8)


def test_lamb_coefficient_outside_window_rejected():
    with pytest.raises(ValueError):
        hilbert_transform_s(FIG1_BATH, 5000.0)


@pytest.mark.parametrize("temperature", [0.0, 0.1, 1.0, 10.0])
def test_correlation_is_non_negative_over_wide_frequency_range(temperature):
    b = BathParams(alpha=1e-2, omega_c=1e2, temperature=temperature)
    rng = np.random.default_rng(11)
    omegas = np.concatenate([rng.uniform(-1e3, 1e3, size=2000), [-1e3, -1e-9, 0.0, 1e-9, 1e3]])
    values = [correlation_ft(b, float(w)) for w in omegas]
    assert all(math.isfinite(v) and v >= 0.0 for v in values)


def test_lamb_coefficient_is_linear_in_coupling():
    weak = BathParams(alpha=1e-2, omega_c=1e2, temperature=0.5)
    strong = replace(weak, alpha=3e-2)
    for omega in (-1.0, 0.0, 1.0):
        assert hilbert_transform_s(strong, omega) == pytest.approx(3.0 * hilbert_transform_s(weak, omega), rel=1e-9)


def test_principal_value_of_constant_is_exact():
    cfg = PVQuadratureConfig()
    # the folded interior integrand vanishes identically
    assert cauchy_principal_value(lambda x: 1.0, 0.3, -2.0, 5.0, cfg) == pytest.approx(
        math.log(4.7 / 2.3), rel=1e-12
    )
    assert cauchy_principal_value(lambda x: 1.0, 0.5, -1.0, 2.0, cfg) == pytest.approx(0.0, abs=1e-13)
