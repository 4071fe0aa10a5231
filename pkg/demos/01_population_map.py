"""Generate and plot the population map of a transmon with one strong defect.

The map shows the post-probe qubit population against the excitation pulse's
frequency and duration.  Four features appear: the qubit line itself, its
two-photon partner half an anharmonicity below, the defect chevron at its
dressed frequency, and the slow two-photon defect line near the midpoint.
Closed-form predictions are overlaid as horizontal markers.

Run:  python demos/01_population_map.py
"""

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import tlsmap

transmon = tlsmap.TransmonParams.from_times(7.0e9, 180e6, t1=10e-6, tphi=1e-6)
defect = tlsmap.TlsParams.from_times(7.08e9, 30e6, t1=800e-9, tphi=1.6e-6)
spec = tlsmap.SystemSpec(transmon, (defect,))

print("calibrating the probe pulse...")
cal = tlsmap.calibrate_pulse_b(spec)
print(f"  probe frequency {cal.omega_tilde_q / 1e9:.6f} GHz "
      f"({(cal.omega_tilde_q - transmon.frequency) / 1e6:+.2f} MHz from bare)")

print("generating the map (201 x 201 points)...")
omega_t_map = tlsmap.generate_map(spec, cal, tlsmap.MapGrid.default(), threads=2)

derived = tlsmap.derived_quantities(spec)
lines = {
    "defect 0-1": tlsmap.freq_01(defect.frequency, defect.coupling, derived.delta),
    "defect 1-1": tlsmap.freq_11(transmon.frequency, defect.frequency,
                                 defect.coupling, transmon.anharmonicity,
                                 derived.delta_tilde),
    "qubit": cal.omega_tilde_q,
    "qubit two-photon": tlsmap.freq_two_photon(transmon.frequency,
                                               transmon.anharmonicity,
                                               defect.coupling, derived.delta),
}

fig, ax = plt.subplots(figsize=(7, 5))
grid = omega_t_map.grid
mesh = ax.pcolormesh(grid.tA_axis * 1e6, grid.omega_d_axis / 1e9,
                     omega_t_map.values, cmap="viridis", rasterized=True)
for label, freq in lines.items():
    ax.axhline(freq / 1e9, color="w", lw=0.6, ls="--", alpha=0.7)
    ax.text(grid.tA_axis[-1] * 1e6 * 1.01, freq / 1e9, label, va="center",
            fontsize=8)
ax.set_xlabel("excitation pulse length (us)")
ax.set_ylabel("drive frequency (GHz)")
fig.colorbar(mesh, ax=ax, label="qubit population after probe")
fig.tight_layout()
fig.savefig("population_map.png", dpi=150)
print("wrote population_map.png")
