"""Reachability-based safe sets for a car driving between two humans."""

from ._core import (
    Config,
    ConfigError,
    DomainError,
    HjsafeError,
    IoError,
    NumericalInstabilityError,
    ValueField,
    constraint_margin,
    flow,
    hamiltonian,
    idm_accel,
    optimal_inputs,
    read_field,
    simulate,
    solve,
    write_field,
)

__all__ = [
    "Config",
    "ConfigError",
    "DomainError",
    "HjsafeError",
    "IoError",
    "NumericalInstabilityError",
    "ValueField",
    "constraint_margin",
    "flow",
    "hamiltonian",
    "idm_accel",
    "optimal_inputs",
    "read_field",
    "simulate",
    "solve",
    "write_field",
]
