"""Coefficient models, symbol algebra, and bicharacteristic flow."""

from .models import (
    ConstantPermittivity,
    CounterexamplePermittivity,
    EllipticityReport,
    KerrPermittivity,
    Permittivity,
    SyntheticCsPermittivity,
    ellipticity_probe,
    eval_permittivity,
    model_from_json,
    model_to_json,
    truncate_coefficient,
)
from .symbols import SymbolPack, assemble_symbols, weighted_norm
from .flow import FlowResult, hamilton_flow

__all__ = [
    "ConstantPermittivity", "CounterexamplePermittivity", "EllipticityReport",
    "KerrPermittivity", "Permittivity", "SyntheticCsPermittivity",
    "ellipticity_probe", "eval_permittivity", "model_from_json",
    "model_to_json", "truncate_coefficient", "SymbolPack", "assemble_symbols",
    "weighted_norm", "FlowResult", "hamilton_flow",
]
