"""Ohmic bath spectrum and principal-value quadrature."""

from .spectrum import (
    BathParams,
    PVQuadratureConfig,
    bose_occupation,
    cauchy_principal_value,
    correlation_ft,
    hilbert_transform_s,
    kms_ratio,
    spectral_density,
)

__all__ = [
    "BathParams",
    "PVQuadratureConfig",
    "bose_occupation",
    "cauchy_principal_value",
    "correlation_ft",
    "hilbert_transform_s",
    "kms_ratio",
    "spectral_density",
]
