"""Numerical constants and default protocol parameters, collected in one place.

All tolerances are chosen well below the physical scales set by the slowest
decoherence rates considered (1/s to 1e7/s), so test failures indicate real
defects rather than float noise.
"""

# --- numerical tolerances ---

# relative Hermiticity tolerance for Hamiltonians: max|H - H^dag| < tol * max|H|
HERMITICITY_TOL = 1e-12

# trace of a density matrix must stay within this of 1
TRACE_TOL = 1e-9

# eigendecomposition propagator is used when cond(eigenvector matrix) is below
# this; otherwise fall back to scaling-and-squaring
EIG_COND_THRESHOLD = 1e8

# cross-check tolerance between the two propagator paths
PROPAGATOR_CROSS_TOL = 1e-8

# steady state requires a one-dimensional kernel: the second-smallest singular
# value must exceed the smallest by this factor
KERNEL_SEPARATION = 1e6

# total Hilbert-space dimension guard for operator construction
DEFAULT_DIM_CAP = 256

# --- protocol defaults ---

# probe pulse: rectangular, 5 MHz amplitude for 100 ns gives a pi rotation
DEFAULT_PULSE_B_AMPLITUDE = 5e6     # Hz
DEFAULT_T_PI = 100e-9               # s

# excitation pulse amplitude, 1/(60 ns)
DEFAULT_PULSE_A_AMPLITUDE = 1.0 / 60e-9   # Hz, ~16.67 MHz

# calibration scan: coarse step and minimum half-window around the bare
# qubit frequency, then golden-section refinement
CALIBRATION_SCAN_STEP = 0.1e6       # Hz
CALIBRATION_MIN_WINDOW = 0.5e6      # Hz
# below this the probe pulse is unusable; a defect at coupling/detuning ~ 0.38
# already caps the reachable population at ~0.89, so the guard sits under that
CALIBRATION_MIN_POPULATION = 0.85

# --- default map grid ---

DEFAULT_FREQ_START = 6.8e9          # Hz
DEFAULT_FREQ_STOP = 7.2e9           # Hz
DEFAULT_FREQ_STEP = 2e6             # Hz
DEFAULT_TIME_STOP = 2e-6            # s
DEFAULT_TIME_STEP = 10e-9           # s

# --- feature extraction ---

# columns count toward a feature when their contrast exceeds this
FEATURE_CONTRAST_THRESHOLD = 0.05
# a detected feature is identified with a predicted transition when within
# this many grid steps of it
FEATURE_PROXIMITY_STEPS = 3
# feature center averages columns down to this fraction of the peak contrast
FEATURE_CORE_FRACTION = 0.5
# the chevron vertex fit samples up to this many columns on each side
FIT_WINDOW_STEPS = 4

# --- estimator ---

ESTIMATOR_MAX_ITERATIONS = 100
ESTIMATOR_TOLERANCE = 1e3           # Hz, on the TLS frequency iterate
ESTIMATOR_DAMPING = 0.5
