"""Two detuned quantum oscillators sharing an ohmic bath.

Exact time-local dynamics of the reduced two-mode state, frequency-locking
analysis of the mean motion, and the phase diagram of the dissipationless
transition driven by a bath-localized mode.
"""

from oscsync.analysis import (
    ProbeSettings,
    SyncReport,
    dominant_frequency,
    locking_threshold,
    run_probe,
    sync_report,
)
from oscsync.bath import MemoryKernel, SpectralDensity, exp_integral_Ei, kernel, self_energy
from oscsync.coeffs import CoeffTrajectory, mean_values, solve_coeffs
from oscsync.fockspace import DensityMatrix, FockBasis, build_operators, coherent_state
from oscsync.master import GeneratorCoeffs, build_generator, evolve, log_negativity
from oscsync.model import InitialState, ModelParams, to_mode_basis, to_relative_basis
from oscsync.pipeline import DynamicsSettings, run_dynamics, sweep_alpha, sweep_boundary
from oscsync.poles import PhaseDiagram, PoleResult, critical_coupling, find_pole, phase_diagram

__all__ = [
    "CoeffTrajectory",
    "DensityMatrix",
    "DynamicsSettings",
    "FockBasis",
    "GeneratorCoeffs",
    "InitialState",
    "MemoryKernel",
    "ModelParams",
    "PhaseDiagram",
    "PoleResult",
    "ProbeSettings",
    "SpectralDensity",
    "SyncReport",
    "build_generator",
    "build_operators",
    "coherent_state",
    "critical_coupling",
    "dominant_frequency",
    "evolve",
    "exp_integral_Ei",
    "find_pole",
    "kernel",
    "locking_threshold",
    "log_negativity",
    "mean_values",
    "phase_diagram",
    "run_dynamics",
    "run_probe",
    "self_energy",
    "solve_coeffs",
    "sweep_alpha",
    "sweep_boundary",
    "sync_report",
    "to_mode_basis",
    "to_relative_basis",
]

__version__ = "0.1.0"
