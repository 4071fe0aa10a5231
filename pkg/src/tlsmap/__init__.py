"""Two-tone defect spectroscopy for fixed-frequency transmons.

Simulates the two-pulse detection protocol (excite at a swept frequency and
duration, probe at the calibrated qubit frequency, read the qubit), produces
(frequency, time) population maps, and estimates defect parameters from them
via closed-form inversion.  See the demos/ directory for worked examples.
"""

from .model import (TransmonParams, TlsParams, SystemSpec, DrivePulse,
                    build_operators, hamiltonian_static, hamiltonian_rwa,
                    hamiltonian_lab, excitation_number)
from .lindblad import (Liouvillian, vectorize, devectorize, sandwich_superop,
                       liouvillian, propagator, evolve, steady_state)
from .protocol import (MapGrid, PulseBCalibration, OmegaTMap, qubit_population,
                       tls_population, ground_state, calibrate_pulse_b,
                       run_sequence, generate_map)
from .analytics import (DerivedQuantities, MapFeature, TlsEstimate,
                        derived_quantities, shift_delta_omega, freq_two_photon,
                        freq_01, rabi_01, freq_11, rabi_11,
                        steady_population_approx, rate_coefficients,
                        rate_evolve, rate_steady_full, extract_features,
                        estimate_tls)
from .mapfile import read_map, write_map
from .config import Config, DatasetRanges, parse_config, load_config
from .dataset import generate_dataset, read_manifest, sample_spec
from .errors import (ValidationError, ConfigError, MapFormatError,
                     CalibrationError, DegenerateSteadyStateError)

__version__ = "0.1.0"

__all__ = [
    "TransmonParams", "TlsParams", "SystemSpec", "DrivePulse",
    "build_operators", "hamiltonian_static", "hamiltonian_rwa",
    "hamiltonian_lab", "excitation_number",
    "Liouvillian", "vectorize", "devectorize", "sandwich_superop",
    "liouvillian", "propagator", "evolve", "steady_state",
    "MapGrid", "PulseBCalibration", "OmegaTMap", "qubit_population",
    "tls_population", "ground_state", "calibrate_pulse_b", "run_sequence",
    "generate_map",
    "DerivedQuantities", "MapFeature", "TlsEstimate", "derived_quantities",
    "shift_delta_omega", "freq_two_photon", "freq_01", "rabi_01", "freq_11",
    "rabi_11", "steady_population_approx", "rate_coefficients", "rate_evolve",
    "rate_steady_full", "extract_features", "estimate_tls",
    "read_map", "write_map",
    "Config", "DatasetRanges", "parse_config", "load_config",
    "generate_dataset", "read_manifest", "sample_spec",
    "ValidationError", "ConfigError", "MapFormatError", "CalibrationError",
    "DegenerateSteadyStateError",
]
