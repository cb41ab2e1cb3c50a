"""Sinc-sampling summation formulas for products of classical special functions."""
from .expansion import (
    FamilyKind,
    FamilySpec,
    InvalidSpecError,
    TruncationConfig,
    bilateral_sinc_sum,
    coeff_c,
    family_value,
    in_domain,
    residual,
    sampling_sum,
)
from .functions import JacobiParams, gegenbauer_hat, hermite, jacobi_hat, legendre_p
from .gseries import GValue, abc_coefficients, eta3, eta4, g_abel_extrapolate, g_closed, table1_classify

__version__ = "0.1.0"

__all__ = [
    "FamilyKind",
    "FamilySpec",
    "GValue",
    "InvalidSpecError",
    "JacobiParams",
    "TruncationConfig",
    "abc_coefficients",
    "bilateral_sinc_sum",
    "coeff_c",
    "eta3",
    "eta4",
    "family_value",
    "g_abel_extrapolate",
    "g_closed",
    "gegenbauer_hat",
    "hermite",
    "in_domain",
    "jacobi_hat",
    "legendre_p",
    "residual",
    "sampling_sum",
    "table1_classify",
]
