"""Quantum-information analysis of a thermally polarized two-spin NMR system."""

__version__ = "0.1.0"

from .oracle import Separability, ppt_verdict
from .quantifiers import (
    coherence_relative_entropy,
    concurrence_check,
    mixedness,
    mixedness_closed_form,
    purity,
    von_neumann_entropy,
)
from .reconstruction import NmrObservables, forward_observables, reconstruct, reconstruct_populations
from .spectrum import line_amplitudes, scenario_spectra, synthesize_trace
from .spin_system import ParameterError, SpinParams, derive_params, energy_levels, hamiltonian_matrix
from .thermal import (
    density_matrix,
    log_partition_function,
    populations,
    thermal_density_matrix,
    thermal_state,
    zero_temperature_state,
)
from .witness import Detection, phase_diagram, witness_expectation, witness_report

__all__ = [
    "Detection",
    "NmrObservables",
    "ParameterError",
    "Separability",
    "SpinParams",
    "coherence_relative_entropy",
    "concurrence_check",
    "density_matrix",
    "derive_params",
    "energy_levels",
    "forward_observables",
    "hamiltonian_matrix",
    "line_amplitudes",
    "log_partition_function",
    "mixedness",
    "mixedness_closed_form",
    "phase_diagram",
    "populations",
    "ppt_verdict",
    "purity",
    "reconstruct",
    "reconstruct_populations",
    "scenario_spectra",
    "synthesize_trace",
    "thermal_density_matrix",
    "thermal_state",
    "von_neumann_entropy",
    "witness_expectation",
    "witness_report",
    "zero_temperature_state",
]
