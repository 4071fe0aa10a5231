"""Round trip: simulate a map for a hidden defect, then recover its
frequency and coupling from the map alone.

Feature extraction locates the high-contrast chevrons, classifies them, and
the defect line is inverted through the dressed-frequency and oscillation
formulas by fixed-point iteration.

Run:  python demos/03_parameter_estimation.py
"""

import numpy as np

import tlsmap

rng = np.random.default_rng(9)
transmon = tlsmap.TransmonParams.from_times(7.0e9, 180e6, t1=10e-6, tphi=1e-6)

hidden = tlsmap.TlsParams.from_times(
    frequency=rng.uniform(7.05e9, 7.15e9),
    coupling=rng.uniform(15e6, 35e6),
    t1=rng.uniform(1e-6, 8e-6),
    tphi=rng.uniform(2e-6, 20e-6))
spec = tlsmap.SystemSpec(transmon, (hidden,))
print(f"hidden defect: {hidden.frequency / 1e9:.6f} GHz, "
      f"coupling {hidden.coupling / 1e6:.2f} MHz")

cal = tlsmap.calibrate_pulse_b(spec)
omega_t_map = tlsmap.generate_map(spec, cal, tlsmap.MapGrid.default(), threads=2)

features = tlsmap.extract_features(omega_t_map)
print("\ndetected features:")
for f in features:
    print(f"  {f.center_frequency / 1e9:.6f} GHz  "
          f"oscillation {f.oscillation_frequency / 1e6:5.2f} MHz  "
          f"contrast {f.contrast:.3f}  {f.kind}")

estimates = tlsmap.estimate_tls(features, transmon, omega_t_map.pulse_a_amplitude)
print("\nestimates:")
for e in estimates:
    err_f = (e.frequency - hidden.frequency) / 1e6
    err_g = 100 * (e.coupling - hidden.coupling) / hidden.coupling
    print(f"  {e.frequency / 1e9:.6f} GHz ({err_f:+.2f} MHz), "
          f"coupling {e.coupling / 1e6:.2f} MHz ({err_g:+.1f}%), "
          f"converged={e.converged}")
