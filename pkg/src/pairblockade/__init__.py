"""Photon blockade and photon-pair statistics of a four-level atom in a bimodal cavity."""

from .amplitude import AmplitudeState, amplitude_steady, two_photon_ratio, verify_interference
from .errors import ConfigError, SimulationError
from .hilbert import HilbertDims, Operator, StateVector, mode_operators
from .lindblad import DensityMatrix, build_liouvillian, evolve, standard_channels, steady_state
from .model import (
    DissipationParams,
    EffectiveParams,
    build_hamiltonian,
    energy_spectrum,
    interference_optimum,
    paper_defaults,
)
from .observables import cauchy_schwarz_gamma, g2_equal_time, g2_tau, photon_number
from .presets import PRESET_NAMES, figure_preset
from .sweep import SweepConfig, SweepResult, load_config, load_result, run_sweep, write_result

__all__ = [
    "AmplitudeState", "ConfigError", "DensityMatrix", "DissipationParams", "EffectiveParams",
    "HilbertDims", "Operator", "PRESET_NAMES", "SimulationError", "StateVector", "SweepConfig",
    "SweepResult", "amplitude_steady", "build_hamiltonian", "build_liouvillian", "cauchy_schwarz_gamma",
    "energy_spectrum", "evolve", "figure_preset", "g2_equal_time", "g2_tau", "interference_optimum",
    "load_config", "load_result", "mode_operators", "paper_defaults", "photon_number", "run_sweep",
    "standard_channels", "steady_state", "two_photon_ratio", "verify_interference", "write_result",
]
