"""Vectorized master-equation machinery: Liouvillian, propagator, steady state.

Density matrices are column-stacked into vectors of length d**2, turning the
master equation into a linear ODE d rho_vec/dt = L rho_vec with a dense
d**2 x d**2 Liouvillian.  For the systems treated here (d <= 16 or so) dense
non-Hermitian eigendecomposition of L is both the simplest and the fastest
way to exponentiate; a scaling-and-squaring fallback covers ill-conditioned
eigenvector matrices.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .constants import EIG_COND_THRESHOLD, KERNEL_SEPARATION, HERMITICITY_TOL
from .errors import ValidationError, DegenerateSteadyStateError
from .model import SystemSpec, Operators, build_operators, check_hermitian


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stack a d x d matrix into a length-d**2 vector."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {rho.shape}")
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def devectorize(vec: np.ndarray) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    vec = np.asarray(vec)
    d = int(round(np.sqrt(vec.size)))
    if d * d != vec.size:
        raise ValidationError(f"vector length {vec.size} is not a perfect square")
    return vec.reshape((d, d), order="F")


def sandwich_superop(o1: np.ndarray, o2: np.ndarray) -> np.ndarray:
    """Matrix M with M @ vectorize(rho) = vectorize(o1 @ rho @ o2).

    For column stacking this is kron(o2.T, o1).
    """
    if o1.shape != o2.shape or o1.shape[0] != o1.shape[1]:
        raise ValidationError(f"operator shapes must match and be square, "
                              f"got {o1.shape} and {o2.shape}")
    return np.kron(o2.T, o1)


def _dissipator(op: np.ndarray, rate: float) -> np.ndarray:
    """Vectorized rate * D[op], D[O]rho = O rho O' - (O'O rho + rho O'O)/2."""
    d = op.shape[0]
    eye = np.eye(d)
    opd_op = op.conj().T @ op
    return rate * (np.kron(op.conj(), op)
                   - 0.5 * np.kron(eye, opd_op)
                   - 0.5 * np.kron(opd_op.T, eye))


class Liouvillian:
    """Dense Liouvillian matrix with a lazily cached eigendecomposition."""

    def __init__(self, matrix: np.ndarray):
        self.matrix = matrix
        self.dim = int(round(np.sqrt(matrix.shape[0])))
        self._eig = None

    def _eigensystem(self):
        if self._eig is None:
            w, v = np.linalg.eig(self.matrix)
            cond = np.linalg.cond(v)
            vinv = None
            if cond < EIG_COND_THRESHOLD:
                vinv = np.linalg.inv(v)
            self._eig = (w, v, vinv, cond)
        return self._eig

    @property
    def diagonalizable(self) -> bool:
        return self._eigensystem()[2] is not None


def liouvillian(spec: SystemSpec, h: np.ndarray, ops: Operators = None) -> Liouvillian:
    """Build the generator of the master equation for Hamiltonian h (rad/s).

    Includes transmon relaxation gamma_q D[a], transmon dephasing
    kappa_q D[a'a], and per-defect gamma_k D[b_k], kappa_k D[b_k' b_k].
    """
    if not check_hermitian(h, HERMITICITY_TOL):
        raise ValidationError("Hamiltonian is not Hermitian")
    ops = ops or build_operators(spec)
    d = ops.dimension
    if h.shape != (d, d):
        raise ValidationError(f"Hamiltonian shape {h.shape} does not match dimension {d}")
    eye = np.eye(d)
    mat = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    tq = spec.transmon
    if tq.gamma:
        mat += _dissipator(ops.a, tq.gamma)
    if tq.kappa:
        mat += _dissipator(ops.number_q, tq.kappa)
    for k, tls in enumerate(spec.tls):
        if tls.gamma:
            mat += _dissipator(ops.b[k], tls.gamma)
        if tls.kappa:
            mat += _dissipator(ops.number_tls[k], tls.kappa)
    return Liouvillian(mat)


def propagator(liou: Liouvillian, t: float) -> np.ndarray:
    """exp(t L), by eigendecomposition when well conditioned, otherwise by
    scipy's scaling-and-squaring."""
    if t < 0:
        raise ValidationError(f"propagation time must be >= 0, got {t}")
    if t == 0.0:
        return np.eye(liou.matrix.shape[0], dtype=complex)
    w, v, vinv, _ = liou._eigensystem()
    if vinv is not None:
        return (v * np.exp(w * t)) @ vinv
    return scipy.linalg.expm(liou.matrix * t)


def evolve(liou: Liouvillian, rho0: np.ndarray, t: float) -> np.ndarray:
    """Propagate a density matrix for time t and re-impose Hermiticity and
    unit trace (suppresses accumulated float asymmetry)."""
    vec = propagator(liou, t) @ vectorize(rho0)
    rho = devectorize(vec)
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def steady_state(liou: Liouvillian) -> np.ndarray:
    """Null vector of L as a density matrix.

    The kernel must be one-dimensional: the second-smallest singular value
    has to exceed the smallest by KERNEL_SEPARATION.
    """
    _, s, vh = np.linalg.svd(liou.matrix)
    smallest, second = s[-1], s[-2]
    if second == 0.0 or (smallest > 0.0 and second / smallest < KERNEL_SEPARATION):
        raise DegenerateSteadyStateError(
            f"Liouvillian kernel is not one-dimensional "
            f"(singular values {smallest:.3e}, {second:.3e})")
    rho = devectorize(vh.conj().T[:, -1])
    rho = 0.5 * (rho + rho.conj().T)
    trace = np.trace(rho).real
    if trace == 0.0:
        raise DegenerateSteadyStateError("steady-state candidate has zero trace")
    return rho / trace
