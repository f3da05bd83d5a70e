"""Fault-tolerance verification and noisy simulation for the [[8,3,2]] color code."""

from .circuit import Circuit, Gate, PhaseVector, UnsupportedPropagation, count_locations, propagate_fault
from .code import CssCode, Residual, TargetState, classify_residual, code_832, target_state_group, validate_code
from .ftverify import FtReport, Verdict, verify_fault_tolerance, witness_errors
from .harness import MatrixConfig, emit_report, run_matrix
from .noise import ExperimentResult, NoiseModel, first_order_acceptance, run_experiment, sample_shot
from .pauli import Membership, PauliGroup, PauliOperator, commutes, in_group, multiply, syndrome
from .reference import (
    ExperimentSpec,
    experiment_circuit,
    ghz_prep_encoded,
    ideal_distribution,
    plus3_prep_encoded,
    readout_rule,
)
from .statevector import OutcomeDistribution, StateVector, run_exact, simulate, tvd

__version__ = "0.1.0"
