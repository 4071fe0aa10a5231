import numpy as np
import pytest

import tlsmap
from tlsmap import (CalibrationError, DrivePulse, MapGrid, PulseBCalibration,
                    SystemSpec, TlsParams, TransmonParams, ValidationError,
                    build_operators, calibrate_pulse_b, generate_map,
                    ground_state, hamiltonian_static, qubit_population,
                    run_sequence, tls_population)


class TestMapGrid:
    def test_regular_construction(self):
        grid = MapGrid.regular(6.8e9, 7.2e9, 2e6, 2e-6, 10e-9)
        assert len(grid.omega_d_axis) == 201
        assert len(grid.tA_axis) == 201
        assert grid.dt == pytest.approx(10e-9)
        assert grid.tA_axis[0] == 0.0

    def test_validation(self):
        with pytest.raises(ValidationError):
            MapGrid(np.array([7.0e9, 6.9e9]), np.array([0.0, 1e-8]))
        with pytest.raises(ValidationError):
            MapGrid(np.array([6.9e9, 7.0e9]), np.array([0.0, 1e-8, 3e-8]))
        with pytest.raises(ValidationError):
            MapGrid(np.array([6.9e9, 7.0e9]), np.array([5e-8, 6e-8]))

    def test_start_at_dt_allowed(self):
        grid = MapGrid(np.array([7.0e9]), np.array([1e-8, 2e-8, 3e-8]))
        assert grid.dt == pytest.approx(1e-8)


class TestPopulations:
    def test_qubit_population_basis_states(self, example_system):
        d = example_system.dimension
        for index, expected in [(0, 0.0), (2, 1.0), (3, 1.0), (4, 0.0), (5, 0.0)]:
            rho = np.zeros((d, d), dtype=complex)
            rho[index, index] = 1.0
            assert qubit_population(rho, example_system) == expected

    def test_tls_population(self, example_system):
        assert tls_population(ground_state(example_system), example_system, 0) == 0.0
        rho = np.zeros((6, 6), dtype=complex)
        rho[1, 1] = 1.0     # |0, 1>
        assert tls_population(rho, example_system, 0) == 1.0
        with pytest.raises(IndexError):
            tls_population(rho, example_system, 1)

    def test_tls_excites_at_dressed_frequency(self, example_system, example_calibration):
        # driving at the shifted defect frequency for a half oscillation
        # period moves the defect close to its population maximum
        clean = example_system.without_decoherence()
        tls = clean.tls[0]
        derived = tlsmap.derived_quantities(clean)
        freq = tlsmap.freq_01(tls.frequency, tls.coupling, derived.delta)
        amp = 1 / 60e-9
        half_period = 0.5 / tlsmap.rabi_01(tls.coupling, derived.delta_tilde, 0.0, amp)
        ops = build_operators(clean)
        h = tlsmap.hamiltonian_rwa(clean, DrivePulse(amp, freq, half_period), ops)
        liou = tlsmap.liouvillian(clean, h, ops)
        rho = tlsmap.evolve(liou, ground_state(clean), half_period)
        assert tls_population(rho, clean, 0) > 0.75


class TestCalibration:
    def test_uncoupled_returns_bare_frequency(self):
        spec = SystemSpec(TransmonParams(7.0e9, 180e6),
                          (TlsParams(7.08e9, 0.0),))
        cal = calibrate_pulse_b(spec)
        assert abs(cal.omega_tilde_q - 7.0e9) < 0.1e6

    def test_shift_matches_dressed_eigenvalue(self, example_system, example_calibration):
        # scan result agrees with the qubit-like dressed eigenvalue
        evals = np.sort(np.linalg.eigvalsh(hamiltonian_static(example_system))) / (2 * np.pi)
        dressed = evals[np.argmin(np.abs(evals - 7.0e9))]
        assert abs(example_calibration.omega_tilde_q - dressed) < 1e6
        # shifted away from the defect by roughly g^2/|Delta| ~ 11 MHz
        assert -13e6 < example_calibration.omega_tilde_q - 7.0e9 < -9e6

    def test_symmetric_defects_cancel(self):
        spec = SystemSpec(TransmonParams(7.0e9, 180e6),
                          (TlsParams(6.92e9, 15e6), TlsParams(7.08e9, 15e6)))
        cal = calibrate_pulse_b(spec)
        assert abs(cal.omega_tilde_q - 7.0e9) < 1e6

    def test_weak_coupling_population_invariant(self):
        # with modest coupling the probe reaches nearly full transfer
        spec = SystemSpec(TransmonParams(7.0e9, 180e6),
                          (TlsParams(7.08e9, 8e6),))
        cal = calibrate_pulse_b(spec)
        ops = build_operators(spec)
        h = tlsmap.hamiltonian_rwa(
            spec.without_decoherence(),
            DrivePulse(cal.amplitude, cal.omega_tilde_q, cal.t_pi), ops)
        w, v = np.linalg.eigh(h)
        psi = v @ (np.exp(-1j * w * cal.t_pi) * v.conj().T[:, 0])
        rho = np.outer(psi, psi.conj())
        assert qubit_population(rho, spec) >= 0.98

    def test_failure_reported_with_value(self, example_system):
        with pytest.raises(CalibrationError) as err:
            calibrate_pulse_b(example_system, min_population=0.99)
        assert err.value.achieved is not None
        assert 0.0 < err.value.achieved < 0.99


class TestSequence:
    def test_zero_length_pulse_a(self, example_system, example_calibration):
        value = run_sequence(example_system, example_calibration, 7.05e9, 0.0)
        # pure probe on the ground state, reduced from 1 only by the dressed
        # state character and decoherence over t_pi
        assert 0.85 < value <= 1.0

    def test_far_detuned_drive_is_inert(self, example_system, example_calibration):
        baseline = run_sequence(example_system, example_calibration, 7.05e9, 0.0)
        value = run_sequence(example_system, example_calibration, 7.7e9, 400e-9)
        assert value == pytest.approx(baseline, abs=0.02)

    def test_probe_blocked_when_defect_excited(self, example_system, example_calibration):
        tls = example_system.tls[0]
        derived = tlsmap.derived_quantities(example_system)
        freq = tlsmap.freq_01(tls.frequency, tls.coupling, derived.delta)
        amp = 1 / 60e-9
        half_period = 0.5 / tlsmap.rabi_01(tls.coupling, derived.delta_tilde, 0.0, amp)
        baseline = run_sequence(example_system, example_calibration, freq, 0.0, amp)
        dipped = run_sequence(example_system, example_calibration, freq, half_period, amp)
        assert dipped < baseline - 0.3


class TestGenerateMap:
    def test_matches_direct_loop(self, example_system, example_calibration):
        grid = MapGrid.regular(7.06e9, 7.096e9, 4e6, 90e-9, 10e-9)
        omega_t_map = generate_map(example_system, example_calibration, grid)
        for i, freq in enumerate(grid.omega_d_axis):
            for j, t in enumerate(grid.tA_axis):
                direct = run_sequence(example_system, example_calibration, freq, t)
                assert abs(direct - omega_t_map.values[i, j]) < 1e-9

    def test_values_in_unit_interval(self, example_map):
        assert example_map.values.min() >= 0.0
        assert example_map.values.max() <= 1.0

    def test_threads_do_not_change_result(self, example_system, example_calibration):
        grid = MapGrid.regular(7.05e9, 7.11e9, 10e6, 200e-9, 20e-9)
        serial = generate_map(example_system, example_calibration, grid, threads=1)
        threaded = generate_map(example_system, example_calibration, grid, threads=2)
        assert np.array_equal(serial.values, threaded.values)

    def test_grid_starting_at_dt(self, example_system, example_calibration):
        full = generate_map(example_system, example_calibration,
                            MapGrid(np.array([7.09e9]), 10e-9 * np.arange(6)))
        offset = generate_map(example_system, example_calibration,
                              MapGrid(np.array([7.09e9]), 10e-9 * np.arange(1, 6)))
        assert np.allclose(full.values[:, 1:], offset.values, atol=1e-12)

    def test_long_drive_limit_matches_steady_state(self, example_system, example_calibration):
        # without the probe, the defect-line column converges to the
        # steady-state qubit population
        tls = example_system.tls[0]
        derived = tlsmap.derived_quantities(example_system)
        freq = tlsmap.freq_01(tls.frequency, tls.coupling, derived.delta)
        no_probe = PulseBCalibration(omega_tilde_q=example_calibration.omega_tilde_q,
                                     t_pi=0.0, amplitude=example_calibration.amplitude)
        grid = MapGrid(np.array([freq]), 200e-9 * np.arange(1, 301))
        column = generate_map(example_system, no_probe, grid).values[0]

        ops = build_operators(example_system)
        h = tlsmap.hamiltonian_rwa(example_system, DrivePulse(1 / 60e-9, freq, 0.0), ops)
        target = qubit_population(tlsmap.steady_state(tlsmap.liouvillian(
            example_system, h, ops)), example_system)
        assert column[-50:].mean() == pytest.approx(target, rel=0.02)

    def test_no_defect_map_shows_only_qubit_features(self):
        spec = SystemSpec(TransmonParams.from_times(7.0e9, 180e6, t1=10e-6, tphi=1e-6))
        cal = calibrate_pulse_b(spec)
        omega_t_map = generate_map(spec, cal, tlsmap.MapGrid.default())
        kinds = {f.kind for f in tlsmap.extract_features(omega_t_map)}
        assert kinds == {"QUBIT_10", "QUBIT_20"}
        # far-detuned columns are flat in time
        far_column = omega_t_map.values[-1]
        assert np.ptp(far_column) < 0.02
