import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import tlsmap
from tlsmap import (DegenerateSteadyStateError, DrivePulse, SystemSpec,
                    TlsParams, TransmonParams, ValidationError, build_operators,
                    devectorize, evolve, hamiltonian_rwa, liouvillian,
                    propagator, sandwich_superop, steady_state, vectorize)
from conftest import random_spec

TWO_PI = 2 * np.pi


def taylor_expm(matrix, t):
    """Series oracle: scale until ||tL|| is small, sum the Taylor series to
    machine precision, then square back up."""
    a = matrix * t
    norm = np.linalg.norm(a, 1)
    squarings = max(int(np.ceil(np.log2(max(norm, 1e-300) / 0.25))), 0)
    a = a / (2 ** squarings)
    term = np.eye(a.shape[0], dtype=complex)
    total = term.copy()
    for k in range(1, 60):
        term = term @ a / k
        total += term
        if np.abs(term).max() < 1e-20:
            break
    for _ in range(squarings):
        total = total @ total
    return total


def two_level_system(gamma=0.0, kappa=0.0):
    return SystemSpec(TransmonParams(7.0e9, 180e6, gamma=gamma, kappa=kappa,
                                     n_levels=2))


def random_density(rng, d):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


class TestVectorize:
    def test_half_identity(self):
        assert np.allclose(vectorize(np.eye(2) / 2), [0.5, 0.0, 0.0, 0.5])

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 31), st.integers(2, 6))
    def test_roundtrip_exact(self, seed, d):
        rho = random_density(np.random.default_rng(seed), d)
        assert np.array_equal(devectorize(vectorize(rho)), rho)

    def test_projection_is_trace(self):
        rng = np.random.default_rng(3)
        spec = SystemSpec(TransmonParams(7e9, 180e6), (TlsParams(7.05e9, 10e6),))
        proj = np.zeros((6, 6))
        proj[2, 2] = proj[3, 3] = 1.0   # transmon level 1, either defect state
        for _ in range(5):
            rho = random_density(rng, 6)
            bracket = vectorize(proj).conj() @ vectorize(rho)
            assert bracket == pytest.approx(np.trace(proj @ rho), rel=1e-12)

    def test_shape_errors(self):
        with pytest.raises(ValidationError):
            vectorize(np.zeros((2, 3)))
        with pytest.raises(ValidationError):
            devectorize(np.zeros(5))


class TestSandwich:
    def test_identity(self):
        eye = np.eye(4, dtype=complex)
        assert np.array_equal(sandwich_superop(eye, eye), np.eye(16))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 31))
    def test_matches_direct_product(self, seed):
        rng = np.random.default_rng(seed)
        o1 = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        o2 = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        rho = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        direct = o1 @ rho @ o2
        via_super = devectorize(sandwich_superop(o1, o2) @ vectorize(rho))
        assert np.allclose(via_super, direct, atol=1e-12)

    def test_right_identity_is_kron(self):
        rng = np.random.default_rng(11)
        o1 = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        assert np.allclose(sandwich_superop(o1, np.eye(3)), np.kron(np.eye(3), o1))

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            sandwich_superop(np.eye(2), np.eye(3))


class TestLiouvillian:
    def test_eigenstate_projector_stationary(self, example_system):
        clean = example_system.without_decoherence()
        ops = build_operators(clean)
        h = hamiltonian_rwa(clean, DrivePulse(10e6, 7.05e9, 1e-6), ops)
        liou = liouvillian(clean, h, ops)
        _, v = np.linalg.eigh(h)
        projector = np.outer(v[:, 2], v[:, 2].conj())
        assert np.abs(liou.matrix @ vectorize(projector)).max() < 1e-6 * TWO_PI

    def test_amplitude_damping(self):
        gamma = 1.25e6
        spec = two_level_system(gamma=gamma)
        ops = build_operators(spec)
        h = hamiltonian_rwa(spec, DrivePulse(0.0, spec.transmon.frequency, 0.0), ops)
        liou = liouvillian(spec, h, ops)
        rho0 = np.diag([0.0, 1.0]).astype(complex)
        for t in (50e-9, 400e-9, 2e-6):
            rho = evolve(liou, rho0, t)
            assert rho[1, 1].real == pytest.approx(np.exp(-gamma * t), rel=1e-9)

    def test_pure_dephasing(self):
        # populations frozen, coherence (n - m) levels apart decays at
        # kappa/2 (n - m)^2
        kappa = 2e6
        spec = SystemSpec(TransmonParams(7e9, 180e6, kappa=kappa))
        ops = build_operators(spec)
        h = hamiltonian_rwa(spec, DrivePulse(0.0, 7e9, 0.0), ops)
        liou = liouvillian(spec, h, ops)
        rho0 = np.full((3, 3), 1.0 / 3.0, dtype=complex)
        t = 300e-9
        u = propagator(liou, t)
        rho = devectorize(u @ vectorize(rho0))
        # rotate out the anharmonicity phase before comparing magnitudes
        assert np.allclose(np.diag(rho).real, 1.0 / 3.0, atol=1e-9)
        assert abs(rho[0, 1]) == pytest.approx(np.exp(-kappa * t / 2) / 3, rel=1e-9)
        assert abs(rho[1, 2]) == pytest.approx(np.exp(-kappa * t / 2) / 3, rel=1e-9)
        assert abs(rho[0, 2]) == pytest.approx(np.exp(-kappa * t * 4 / 2) / 3, rel=1e-9)

    def test_rejects_non_hermitian(self, example_system):
        bad = np.zeros((6, 6), dtype=complex)
        bad[0, 1] = 1.0
        with pytest.raises(ValidationError, match="Hermitian"):
            liouvillian(example_system, bad)

    def test_trace_functional_annihilated(self, example_system):
        ops = build_operators(example_system)
        h = hamiltonian_rwa(example_system, DrivePulse(16.7e6, 7.09e9, 1e-6), ops)
        liou = liouvillian(example_system, h, ops)
        left = vectorize(np.eye(6)).conj() @ liou.matrix
        assert np.abs(left).max() < 1e-9 * np.abs(liou.matrix).max()


class TestPropagator:
    def test_zero_time_identity(self, example_system):
        ops = build_operators(example_system)
        h = hamiltonian_rwa(example_system, DrivePulse(5e6, 7.0e9, 0.0), ops)
        liou = liouvillian(example_system, h, ops)
        assert np.array_equal(propagator(liou, 0.0), np.eye(36))

    def test_semigroup(self):
        rng = np.random.default_rng(5)
        spec = random_spec(rng)
        ops = build_operators(spec)
        h = hamiltonian_rwa(spec, DrivePulse(10e6, 7.05e9, 0.0), ops)
        liou = liouvillian(spec, h, ops)
        t1, t2 = 37e-9, 120e-9
        combined = propagator(liou, t1) @ propagator(liou, t2)
        assert np.abs(combined - propagator(liou, t1 + t2)).max() < 1e-9

    def test_against_series_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(5):
            spec = random_spec(rng)
            ops = build_operators(spec)
            pulse = DrivePulse(rng.uniform(1e6, 20e6), rng.uniform(6.9e9, 7.1e9), 0.0)
            liou = liouvillian(spec, hamiltonian_rwa(spec, pulse, ops), ops)
            t = rng.uniform(10e-9, 300e-9)
            assert np.abs(propagator(liou, t) - taylor_expm(liou.matrix, t)).max() < 1e-8

    def test_negative_time_rejected(self, example_system):
        ops = build_operators(example_system)
        h = hamiltonian_rwa(example_system, DrivePulse(0.0, 7e9, 0.0), ops)
        with pytest.raises(ValidationError):
            propagator(liouvillian(example_system, h, ops), -1e-9)

    def test_unitary_channel(self):
        # rates off: the propagator acts as rho -> U rho U^dagger
        rng = np.random.default_rng(23)
        spec = random_spec(rng, decohering=False)
        ops = build_operators(spec)
        h = hamiltonian_rwa(spec, DrivePulse(12e6, 7.02e9, 0.0), ops)
        liou = liouvillian(spec, h, ops)
        t = 150e-9
        w, v = np.linalg.eigh(h)
        unitary = v @ np.diag(np.exp(-1j * w * t)) @ v.conj().T
        rho0 = random_density(rng, 6)
        via_liouvillian = devectorize(propagator(liou, t) @ vectorize(rho0))
        assert np.abs(via_liouvillian - unitary @ rho0 @ unitary.conj().T).max() < 1e-9


class TestPhysicality:
    def test_trace_hermiticity_positivity(self, example_system):
        ops = build_operators(example_system)
        h = hamiltonian_rwa(example_system, DrivePulse(1 / 60e-9, 7.09125e9, 0.0), ops)
        liou = liouvillian(example_system, h, ops)
        rho0 = tlsmap.ground_state(example_system)
        for t in (10e-9, 1e-6, 10e-6, 100e-6):
            rho = devectorize(propagator(liou, t) @ vectorize(rho0))
            assert abs(np.trace(rho) - 1.0) < 1e-9
            assert np.abs(rho - rho.conj().T).max() < 1e-9
            evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
            assert evals.min() > -1e-7


class TestSteadyState:
    def test_undriven_relaxes_to_ground(self, example_system):
        ops = build_operators(example_system)
        h = hamiltonian_rwa(example_system, DrivePulse(0.0, 7.05e9, 0.0), ops)
        rho = steady_state(liouvillian(example_system, h, ops))
        expected = np.zeros((6, 6))
        expected[0, 0] = 1.0
        assert np.abs(rho - expected).max() < 1e-9

    def test_driven_two_level_saturation(self):
        # analytic oracle: P = (W^2/2) g2 / (g1 (d^2 + g2^2) + W^2 g2), with
        # g1 the relaxation rate, g2 = (g1 + kappa)/2 the coherence decay
        gamma, kappa = 1.25e6, 1.0e6
        spec = two_level_system(gamma=gamma, kappa=kappa)
        ops = build_operators(spec)
        for amp, detuning in [(2e6, 0.0), (8e6, 0.0), (5e6, 12e6)]:
            pulse = DrivePulse(amp, spec.transmon.frequency - detuning, 0.0)
            rho = steady_state(liouvillian(spec, hamiltonian_rwa(spec, pulse, ops), ops))
            omega = TWO_PI * amp
            delta = TWO_PI * detuning
            g2 = (gamma + kappa) / 2
            oracle = (omega ** 2 / 2 * g2
                      / (gamma * (delta ** 2 + g2 ** 2) + omega ** 2 * g2))
            assert rho[1, 1].real == pytest.approx(oracle, rel=1e-6)

    def test_degenerate_kernel_detected(self, example_system):
        clean = example_system.without_decoherence()
        ops = build_operators(clean)
        h = hamiltonian_rwa(clean, DrivePulse(0.0, 7.05e9, 0.0), ops)
        with pytest.raises(DegenerateSteadyStateError):
            steady_state(liouvillian(clean, h, ops))

    def test_monotone_approach(self, example_system):
        # full propagation converges to the steady state after t >> 1/Gamma
        ops = build_operators(example_system)
        h = hamiltonian_rwa(example_system, DrivePulse(1 / 60e-9, 7.09125e9, 0.0), ops)
        liou = liouvillian(example_system, h, ops)
        target = tlsmap.qubit_population(steady_state(liou), example_system)
        rho = evolve(liou, tlsmap.ground_state(example_system), 50e-6)
        assert tlsmap.qubit_population(rho, example_system) == pytest.approx(target, rel=0.01)
