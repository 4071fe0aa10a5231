import numpy as np
import pytest

import tlsmap


@pytest.fixture(scope="session")
def example_system():
    """The worked example system used throughout: 7 GHz transmon with a
    strongly coupled defect 80 MHz above it."""
    transmon = tlsmap.TransmonParams.from_times(7.0e9, 180e6, t1=10e-6, tphi=1e-6)
    tls = tlsmap.TlsParams.from_times(7.08e9, 30e6, t1=800e-9, tphi=1.6e-6)
    return tlsmap.SystemSpec(transmon, (tls,))


@pytest.fixture(scope="session")
def example_calibration(example_system):
    return tlsmap.calibrate_pulse_b(example_system)


@pytest.fixture(scope="session")
def example_map(example_system, example_calibration):
    return tlsmap.generate_map(example_system, example_calibration, tlsmap.MapGrid.default())


def random_spec(rng, n_tls=1, decohering=True):
    """Physically plausible random system for property tests."""
    transmon = tlsmap.TransmonParams.from_times(
        7.0e9, 180e6,
        t1=rng.uniform(5e-6, 20e-6) if decohering else np.inf,
        tphi=rng.uniform(0.5e-6, 5e-6) if decohering else np.inf)
    tls = []
    for _ in range(n_tls):
        tls.append(tlsmap.TlsParams.from_times(
            rng.uniform(6.8e9, 7.2e9), rng.uniform(5e6, 50e6),
            t1=rng.uniform(0.5e-6, 10e-6) if decohering else np.inf,
            tphi=rng.uniform(0.5e-6, 30e-6) if decohering else np.inf))
    return tlsmap.SystemSpec(transmon, tuple(tls))
