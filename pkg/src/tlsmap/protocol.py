"""Two-pulse detection protocol and (frequency, time)-map generation.

The sequence per point: prepare the ground state, apply excitation pulse A at
frequency omega_d for time t_A, apply the calibrated probe pulse B at the
measured qubit frequency, then read the population of the first excited
transmon level.  Sweeping omega_d and t_A yields the map.

Each pulse is evolved under its own rotating-frame Liouvillian; relative
frame phases between the pulses are discarded, which leaves all number-
diagonal observables unchanged.  Because the probe segment is the same for
every point and the time axis is uniform, a whole map reduces to one left
vector (readout through pulse B), one single-step propagator per frequency
column, and a matrix-vector iteration down each column.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import constants as c
from .errors import ValidationError, CalibrationError
from .lindblad import liouvillian, propagator, vectorize
from .model import (DrivePulse, Operators, SystemSpec, build_operators,
                    hamiltonian_rwa)


@dataclass(frozen=True)
class MapGrid:
    """Axes of a population map: drive frequencies (Hz) and pulse-A durations (s).

    The time axis must be uniform and start at 0 or one step.
    """

    omega_d_axis: np.ndarray
    tA_axis: np.ndarray

    def __post_init__(self):
        freq = np.asarray(self.omega_d_axis, dtype=float)
        times = np.asarray(self.tA_axis, dtype=float)
        object.__setattr__(self, "omega_d_axis", freq)
        object.__setattr__(self, "tA_axis", times)
        if freq.ndim != 1 or times.ndim != 1 or len(freq) < 1 or len(times) < 2:
            raise ValidationError("grid axes must be 1-d with >= 1 frequency and >= 2 times")
        if np.any(np.diff(freq) <= 0) or np.any(np.diff(times) <= 0):
            raise ValidationError("grid axes must be strictly increasing")
        steps = np.diff(times)
        dt = steps[0]
        if np.any(np.abs(steps - dt) > 1e-9 * dt):
            raise ValidationError("time axis must be uniform")
        if not (abs(times[0]) < 1e-15 or abs(times[0] - dt) < 1e-9 * dt):
            raise ValidationError("time axis must start at 0 or at one step")

    @property
    def dt(self) -> float:
        return float(self.tA_axis[1] - self.tA_axis[0])

    @property
    def freq_step(self) -> float:
        return float(self.omega_d_axis[1] - self.omega_d_axis[0]) \
            if len(self.omega_d_axis) > 1 else 0.0

    @classmethod
    def regular(cls, freq_start, freq_stop, freq_step, time_stop, time_step):
        n_f = int(round((freq_stop - freq_start) / freq_step)) + 1
        n_t = int(round(time_stop / time_step)) + 1
        return cls(freq_start + freq_step * np.arange(n_f),
                   time_step * np.arange(n_t))

    @classmethod
    def default(cls):
        return cls.regular(c.DEFAULT_FREQ_START, c.DEFAULT_FREQ_STOP,
                           c.DEFAULT_FREQ_STEP, c.DEFAULT_TIME_STOP,
                           c.DEFAULT_TIME_STEP)


@dataclass(frozen=True)
class PulseBCalibration:
    """Probe pulse parameters: calibrated qubit frequency, length, amplitude."""

    omega_tilde_q: float                       # Hz
    t_pi: float = c.DEFAULT_T_PI               # s
    amplitude: float = c.DEFAULT_PULSE_B_AMPLITUDE  # Hz


@dataclass(frozen=True)
class OmegaTMap:
    """Qubit populations on a MapGrid, with the generating context attached.

    values[i, j] is the post-probe population at omega_d_axis[i], tA_axis[j].
    """

    values: np.ndarray
    grid: MapGrid
    spec: SystemSpec
    calibration: PulseBCalibration
    pulse_a_amplitude: float

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        expected = (len(self.grid.omega_d_axis), len(self.grid.tA_axis))
        if vals.shape != expected:
            raise ValidationError(f"map shape {vals.shape} does not match grid {expected}")
        if vals.min() < -1e-6 or vals.max() > 1 + 1e-6:
            raise ValidationError("map values fall outside [0, 1]")


def _projector_level1(spec: SystemSpec) -> np.ndarray:
    p = np.zeros((spec.transmon.n_levels, spec.transmon.n_levels))
    p[1, 1] = 1.0
    return np.kron(p, np.eye(2 ** spec.n_tls)).astype(complex)


def qubit_population(rho: np.ndarray, spec: SystemSpec) -> float:
    """Population of the first excited transmon level, traced over all defects."""
    return float(np.trace(_projector_level1(spec) @ rho).real)


def tls_population(rho: np.ndarray, spec: SystemSpec, k: int,
                   ops: Operators = None) -> float:
    """Excited-state population of defect k."""
    if not 0 <= k < spec.n_tls:
        raise IndexError(f"TLS index {k} out of range for {spec.n_tls} defects")
    ops = ops or build_operators(spec)
    return float(np.trace(ops.number_tls[k] @ rho).real)


def ground_state(spec: SystemSpec) -> np.ndarray:
    rho = np.zeros((spec.dimension, spec.dimension), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def _pulse_b_population(spec, ops, proj, frequency, amplitude, t_pi):
    """Post-probe qubit population from the ground state, decoherence-free.

    Unitary evolution via Hermitian eigendecomposition; cheap enough to call
    hundreds of times during the calibration scan.
    """
    h = hamiltonian_rwa(spec, DrivePulse(amplitude, frequency, t_pi), ops)
    w, v = np.linalg.eigh(h)
    psi0 = np.zeros(spec.dimension, dtype=complex)
    psi0[0] = 1.0
    psi = v @ (np.exp(-1j * w * t_pi) * (v.conj().T @ psi0))
    return float(np.real(psi.conj() @ (proj @ psi)))


def calibrate_pulse_b(spec: SystemSpec,
                      t_pi: float = c.DEFAULT_T_PI,
                      amplitude: float = c.DEFAULT_PULSE_B_AMPLITUDE,
                      min_population: float = c.CALIBRATION_MIN_POPULATION) -> PulseBCalibration:
    """Find the probe frequency that maximizes the post-pulse qubit population.

    Scans around the bare qubit frequency over a window set by the expected
    dressed shifts (3 * sum g_k^2/|Delta_k|), then refines the best scan point
    by golden-section search.  The system is taken decoherence-free and in its
    ground state, matching how the probe would be tuned up with the defects
    unexcited.
    """
    ops = build_operators(spec)
    proj = _projector_level1(spec)
    wq = spec.transmon.frequency

    window = 0.0
    for tls in spec.tls:
        detuning = wq - tls.frequency
        if detuning != 0.0:
            window += tls.coupling ** 2 / abs(detuning)
    window = max(3.0 * window, c.CALIBRATION_MIN_WINDOW)

    clean = spec.without_decoherence()
    scan = np.arange(wq - window, wq + window + c.CALIBRATION_SCAN_STEP / 2,
                     c.CALIBRATION_SCAN_STEP)
    values = [_pulse_b_population(clean, ops, proj, f, amplitude, t_pi) for f in scan]
    best = int(np.argmax(values))

    # golden-section refinement inside the bracket around the best scan point
    lo = scan[max(best - 1, 0)]
    hi = scan[min(best + 1, len(scan) - 1)]
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = _pulse_b_population(clean, ops, proj, x1, amplitude, t_pi)
    f2 = _pulse_b_population(clean, ops, proj, x2, amplitude, t_pi)
    for _ in range(40):
        if hi - lo < 1e3:       # 1 kHz is far below any feature width here
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = _pulse_b_population(clean, ops, proj, x2, amplitude, t_pi)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = _pulse_b_population(clean, ops, proj, x1, amplitude, t_pi)
    omega = 0.5 * (lo + hi)
    achieved = _pulse_b_population(clean, ops, proj, omega, amplitude, t_pi)
    if achieved < min_population:
        raise CalibrationError(
            f"probe calibration reached population {achieved:.3f} "
            f"< {min_population}", achieved=achieved)
    return PulseBCalibration(omega_tilde_q=float(omega), t_pi=t_pi, amplitude=amplitude)


def _probe_left_vector(spec, cal, ops):
    """vec(P1)' exp(t_pi L_B): the readout functional folded through pulse B."""
    h_b = hamiltonian_rwa(spec, DrivePulse(cal.amplitude, cal.omega_tilde_q, cal.t_pi), ops)
    liou_b = liouvillian(spec, h_b, ops)
    u_b = propagator(liou_b, cal.t_pi)
    return vectorize(_projector_level1(spec)).conj() @ u_b


def run_sequence(spec: SystemSpec, cal: PulseBCalibration, omega_d: float,
                 t_a: float,
                 pulse_a_amplitude: float = c.DEFAULT_PULSE_A_AMPLITUDE) -> float:
    """One point of the protocol: ground state, pulse A, pulse B, readout."""
    ops = build_operators(spec)
    h_a = hamiltonian_rwa(spec, DrivePulse(pulse_a_amplitude, omega_d, t_a), ops)
    liou_a = liouvillian(spec, h_a, ops)
    vec = propagator(liou_a, t_a) @ vectorize(ground_state(spec))
    return float(np.real(_probe_left_vector(spec, cal, ops) @ vec))


def _map_column(spec, ops, left, v0, omega_d, amplitude, dt, n_t):
    h_a = hamiltonian_rwa(spec, DrivePulse(amplitude, omega_d, dt), ops)
    step = propagator(liouvillian(spec, h_a, ops), dt)
    out = np.empty(n_t)
    v = v0.copy()
    for j in range(n_t):
        out[j] = np.real(left @ v)
        v = step @ v
    return out


def generate_map(spec: SystemSpec, cal: PulseBCalibration, grid: MapGrid,
                 pulse_a_amplitude: float = c.DEFAULT_PULSE_A_AMPLITUDE,
                 threads: int = 1) -> OmegaTMap:
    """Compute the full population map on `grid`.

    The probe left vector is computed once; each frequency column forms its
    single-step propagator once and iterates it down the time axis.  Columns
    are independent, so they can be distributed over a thread pool without
    changing the result.
    """
    ops = build_operators(spec)
    left = _probe_left_vector(spec, cal, ops)
    v0 = vectorize(ground_state(spec))

    n_t = len(grid.tA_axis)
    dt = grid.dt
    starts_at_dt = abs(grid.tA_axis[0]) > 1e-15

    def column(omega_d):
        col = _map_column(spec, ops, left, v0, omega_d, pulse_a_amplitude, dt,
                          n_t + (1 if starts_at_dt else 0))
        return col[1:] if starts_at_dt else col

    freqs = grid.omega_d_axis
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            columns = list(pool.map(column, freqs))
    else:
        columns = [column(f) for f in freqs]
    values = np.clip(np.asarray(columns), 0.0, 1.0)
    return OmegaTMap(values=values, grid=grid, spec=spec, calibration=cal,
                     pulse_a_amplitude=pulse_a_amplitude)
