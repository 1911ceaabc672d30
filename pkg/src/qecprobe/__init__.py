"""Stabilizer error-correction codes as metrological probes.

Symplectic Pauli algebra, code analysis (groups, cosets, distance,
classification), a dense statevector oracle, and Monte Carlo phase
estimation with noise and correction cycles.
"""

from .pauli import PauliOperator, commutes, cyclic_shift, identity, multiply, parse, weight
from .stabilizer import (
    BUILTIN_CODES,
    Classification,
    ClassificationKind,
    StabilizerCode,
    classify,
    correctable_set_check,
    cyclic_orbit_report,
    distance,
    enumerate_group,
    get_builtin,
    load_code_file,
    logical_coset,
    min_weight_logical,
    parse_code_text,
    redundancy_formula,
    validate_code,
)
from .simulator import (
    SignalHamiltonian,
    StateVector,
    apply_pauli,
    codespace_basis,
    evolve,
    expectation,
    logical_action_oracle,
)
from .metrology import (
    CorrectionSchedule,
    ExperimentConfig,
    ExperimentResult,
    NoiseModel,
    cramer_rao_uncertainty,
    default_xi,
    logical_z_orbit_signal,
    loglog_slope,
    monte_carlo_estimate,
    noisy_run,
    prepare_probe,
    ramsey_signal,
    readout_operator,
    signal_profile,
    sql_baseline,
    syndrome_table,
)
from . import kernels

__version__ = "0.1.0"

__all__ = [
    "PauliOperator", "parse", "multiply", "commutes", "weight", "cyclic_shift", "identity",
    "StabilizerCode", "Classification", "ClassificationKind", "BUILTIN_CODES",
    "validate_code", "enumerate_group", "classify", "correctable_set_check",
    "distance", "min_weight_logical", "logical_coset", "cyclic_orbit_report",
    "redundancy_formula", "get_builtin", "load_code_file", "parse_code_text",
    "StateVector", "SignalHamiltonian", "codespace_basis", "apply_pauli",
    "evolve", "expectation", "logical_action_oracle",
    "NoiseModel", "CorrectionSchedule", "ExperimentConfig", "ExperimentResult",
    "prepare_probe", "readout_operator", "ramsey_signal", "cramer_rao_uncertainty",
    "sql_baseline", "default_xi", "logical_z_orbit_signal", "signal_profile",
    "monte_carlo_estimate", "noisy_run", "syndrome_table", "loglog_slope",
    "kernels",
    "__version__",
]
