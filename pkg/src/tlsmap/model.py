"""Physical system definition and Hamiltonian construction.

A transmon truncated to its lowest ``n_levels`` is coupled to K two-level
defects (hard-core bosons) on the product Hilbert space of dimension
``n_levels * 2**K``.  All user-facing frequencies, couplings, and drive
amplitudes are ordinary frequencies in Hz; the conversion to angular
frequency happens once, inside the Hamiltonian builders.  Returned
Hamiltonians are therefore H/hbar in rad/s, as plain complex ndarrays.

Dissipation and pure-dephasing rates are plain rates in 1/s, related to the
usual coherence times by gamma = 1/T1 and kappa = 2/T_phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .constants import DEFAULT_DIM_CAP, HERMITICITY_TOL
from .errors import ValidationError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TransmonParams:
    """Transmon frequency, anharmonicity, and decoherence rates.

    The 1->2 transition sits at ``frequency - anharmonicity``.
    """

    frequency: float            # Hz, 0->1 transition
    anharmonicity: float        # Hz, positive for a transmon
    gamma: float = 0.0          # 1/s, relaxation rate 1/T1
    kappa: float = 0.0          # 1/s, pure-dephasing rate 2/T_phi
    n_levels: int = 3

    def __post_init__(self):
        if self.frequency <= 0:
            raise ValidationError(f"transmon frequency must be > 0, got {self.frequency}")
        if self.anharmonicity <= 0:
            raise ValidationError(f"anharmonicity must be > 0, got {self.anharmonicity}")
        if self.gamma < 0 or self.kappa < 0:
            raise ValidationError("decoherence rates must be >= 0")
        if self.n_levels < 2:
            raise ValidationError(f"need at least 2 transmon levels, got {self.n_levels}")

    @classmethod
    def from_times(cls, frequency, anharmonicity, t1=math.inf, tphi=math.inf, n_levels=3):
        """Build from coherence times instead of rates (seconds; inf allowed)."""
        return cls(frequency, anharmonicity,
                   gamma=0.0 if math.isinf(t1) else 1.0 / t1,
                   kappa=0.0 if math.isinf(tphi) else 2.0 / tphi,
                   n_levels=n_levels)


@dataclass(frozen=True)
class TlsParams:
    """One two-level defect: frequency, transmon coupling, decoherence rates."""

    frequency: float            # Hz
    coupling: float             # Hz, transverse coupling to the transmon
    drive_factor: float = 0.0   # direct drive pickup relative to the transmon
    gamma: float = 0.0          # 1/s, 1/T1
    kappa: float = 0.0          # 1/s, 2/T_phi

    def __post_init__(self):
        if self.frequency <= 0:
            raise ValidationError(f"TLS frequency must be > 0, got {self.frequency}")
        if self.coupling < 0:
            raise ValidationError(f"TLS coupling must be >= 0, got {self.coupling}")
        if self.drive_factor < 0:
            raise ValidationError("TLS drive factor must be >= 0")
        if self.gamma < 0 or self.kappa < 0:
            raise ValidationError("decoherence rates must be >= 0")

    @classmethod
    def from_times(cls, frequency, coupling, t1=math.inf, tphi=math.inf, drive_factor=0.0):
        return cls(frequency, coupling, drive_factor=drive_factor,
                   gamma=0.0 if math.isinf(t1) else 1.0 / t1,
                   kappa=0.0 if math.isinf(tphi) else 2.0 / tphi)


@dataclass(frozen=True)
class SystemSpec:
    """Full system: one transmon plus an ordered list of defects."""

    transmon: TransmonParams
    tls: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "tls", tuple(self.tls))

    @property
    def n_tls(self) -> int:
        return len(self.tls)

    @property
    def dimension(self) -> int:
        return self.transmon.n_levels * 2 ** self.n_tls

    def without_decoherence(self) -> "SystemSpec":
        """Copy of this system with every decoherence rate set to zero."""
        return SystemSpec(
            replace(self.transmon, gamma=0.0, kappa=0.0),
            tuple(replace(t, gamma=0.0, kappa=0.0) for t in self.tls),
        )


@dataclass(frozen=True)
class DrivePulse:
    """Rectangular drive pulse: amplitude and frequency in Hz, duration in s."""

    amplitude: float
    frequency: float
    duration: float

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValidationError(f"pulse amplitude must be >= 0, got {self.amplitude}")
        if self.duration < 0:
            raise ValidationError(f"pulse duration must be >= 0, got {self.duration}")


@dataclass(frozen=True)
class Operators:
    """Ladder operators on the full product space, plus cached composites."""

    a: np.ndarray
    a_dag: np.ndarray
    b: tuple
    b_dag: tuple
    dimension: int
    number_q: np.ndarray = field(repr=False, default=None)
    number_tls: tuple = field(repr=False, default=())


def _kron_all(mats):
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def _embed(local, slot, dims):
    """Place a local operator at `slot` in the tensor product, identity elsewhere."""
    factors = [np.eye(d, dtype=complex) for d in dims]
    factors[slot] = local
    return _kron_all(factors)


def build_operators(spec: SystemSpec, dim_cap: int = DEFAULT_DIM_CAP) -> Operators:
    """Construct the transmon lowering operator and one hard-core lowering
    operator per defect, all embedded in the full product space.

    The transmon operator is the usual truncated boson (entries sqrt(1..n-1)
    on the superdiagonal); defect operators satisfy b^2 = 0 exactly.
    """
    dim = spec.dimension
    if dim > dim_cap:
        raise ValidationError(
            f"Hilbert-space dimension {dim} exceeds cap {dim_cap}; "
            f"reduce the number of defects or raise dim_cap")
    n = spec.transmon.n_levels
    dims = [n] + [2] * spec.n_tls
    a_local = np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(complex)
    b_local = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)

    a = _embed(a_local, 0, dims)
    b = tuple(_embed(b_local, 1 + k, dims) for k in range(spec.n_tls))
    b_dag = tuple(op.conj().T for op in b)
    number_q = a.conj().T @ a
    number_tls = tuple(bd @ bk for bd, bk in zip(b_dag, b))
    return Operators(a=a, a_dag=a.conj().T, b=b, b_dag=b_dag, dimension=dim,
                     number_q=number_q, number_tls=number_tls)


def hamiltonian_static(spec: SystemSpec, ops: Operators = None) -> np.ndarray:
    """Undriven Hamiltonian H/hbar in rad/s.

    omega_q a'a - (U/2) a'a'aa + sum_k [omega_k b'b + g_k (a'b + a b')]
    with every frequency promoted from Hz to angular.
    """
    ops = ops or build_operators(spec)
    tq = spec.transmon
    a, ad = ops.a, ops.a_dag
    h = TWO_PI * tq.frequency * ops.number_q \
        - TWO_PI * tq.anharmonicity / 2.0 * (ad @ ad @ a @ a)
    for k, tls in enumerate(spec.tls):
        bk, bdk = ops.b[k], ops.b_dag[k]
        h = h + TWO_PI * tls.frequency * ops.number_tls[k] \
            + TWO_PI * tls.coupling * (ad @ bk + a @ bdk)
    return h


def _drive_operator(spec: SystemSpec, ops: Operators) -> np.ndarray:
    d = ops.a + ops.a_dag
    for k, tls in enumerate(spec.tls):
        if tls.drive_factor:
            d = d + tls.drive_factor * (ops.b[k] + ops.b_dag[k])
    return d


def hamiltonian_rwa(spec: SystemSpec, pulse: DrivePulse, ops: Operators = None) -> np.ndarray:
    """Time-independent Hamiltonian in the frame rotating at the drive frequency.

    Detunes every excitation by the drive frequency and keeps the co-rotating
    half of the drive: (A/2)(a + a' + sum_k lambda_k (b + b')).
    """
    ops = ops or build_operators(spec)
    h = hamiltonian_static(spec, ops)
    h = h - TWO_PI * pulse.frequency * excitation_number(spec, ops)
    if pulse.amplitude:
        h = h + TWO_PI * pulse.amplitude / 2.0 * _drive_operator(spec, ops)
    return h


def hamiltonian_lab(spec: SystemSpec, pulse: DrivePulse, t: float,
                    ops: Operators = None) -> np.ndarray:
    """Lab-frame Hamiltonian at time t, with the full oscillating drive.

    Only used as a validation oracle for the rotating-frame treatment; map
    generation always goes through :func:`hamiltonian_rwa`.
    """
    ops = ops or build_operators(spec)
    h = hamiltonian_static(spec, ops)
    if pulse.amplitude:
        amp = TWO_PI * pulse.amplitude * math.cos(TWO_PI * pulse.frequency * t)
        h = h + amp * _drive_operator(spec, ops)
    return h


def excitation_number(spec: SystemSpec, ops: Operators = None) -> np.ndarray:
    """Total excitation number N = a'a + sum_k b'b (commutes with the
    undriven Hamiltonian)."""
    ops = ops or build_operators(spec)
    n = ops.number_q.copy()
    for nk in ops.number_tls:
        n = n + nk
    return n


def check_hermitian(h: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    scale = max(np.abs(h).max(), 1.0)
    return np.abs(h - h.conj().T).max() < tol * scale
