"""Singular inner functions with certified minimum-modulus decay."""

from ._core import (
    CalibrationError,
    CalibrationReport,
    CantorModel,
    ConstructionError,
    DecayProfile,
    DomainError,
    FrostmanReport,
    Gauge,
    InvalidProfileError,
    PrecisionError,
    SchemaError,
    build_model,
    certify_estimate,
    fast_bound_check,
    hausdorff_lower_bound,
    hausdorff_upper_bound,
    log_modulus,
    min_on_circle,
    parse_radii_spec,
    radial_probe,
    run_cli,
    split_bound,
    value,
    verify_frostman,
)

__all__ = [
    "CalibrationError",
    "CalibrationReport",
    "CantorModel",
    "ConstructionError",
    "DecayProfile",
    "DomainError",
    "FrostmanReport",
    "Gauge",
    "InvalidProfileError",
    "PrecisionError",
    "SchemaError",
    "build_model",
    "certify_estimate",
    "fast_bound_check",
    "hausdorff_lower_bound",
    "hausdorff_upper_bound",
    "log_modulus",
    "min_on_circle",
    "parse_radii_spec",
    "radial_probe",
    "run_cli",
    "split_bound",
    "value",
    "verify_frostman",
]
