"""Quantization, the Maxwell operator, its diagonalizer, and norm probes."""

from .quantize import QuantizeError, RoughSymbol, quantize, quantize_info
from .weighted import WeightedNormOperator, plateau
from .maxwell import MaxwellOperators, apply_diagonalizer, apply_maxwell_P
from .probes import (
    OperatorProbe,
    fit_slope,
    frequency_leakage_probe,
    mdn_residual_probe,
    power_iteration,
    probes_to_csv,
    slopes_to_json,
)

__all__ = [
    "QuantizeError", "RoughSymbol", "quantize", "quantize_info",
    "WeightedNormOperator", "plateau", "MaxwellOperators",
    "apply_diagonalizer", "apply_maxwell_P", "OperatorProbe", "fit_slope",
    "frequency_leakage_probe", "mdn_residual_probe", "power_iteration",
    "probes_to_csv", "slopes_to_json",
]
