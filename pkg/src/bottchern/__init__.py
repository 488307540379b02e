"""Exact cohomology of invariant complex models (Dolbeault, Bott-Chern, Aeppli, ...)."""

from .bicomplex import ComplexModel, Form, FormBasisElement, validate_model
from .cohomology import CohomologyReport, full_report
from .exactnum import GaussianRational
from .formulas3 import check_identities, predict_bc_table, verify_model
from .modelio import builtin_model, parse_model, serialize_model

__all__ = [
    "ComplexModel",
    "Form",
    "FormBasisElement",
    "validate_model",
    "CohomologyReport",
    "full_report",
    "GaussianRational",
    "check_identities",
    "predict_bc_table",
    "verify_model",
    "builtin_model",
    "parse_model",
    "serialize_model",
]
