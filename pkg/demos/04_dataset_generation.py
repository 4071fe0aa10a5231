"""Generate a small labeled dataset of two-defect maps and read it back.

Each map is written in the binary container format together with a manifest
line holding the ground-truth labels, sorted by defect frequency.  The same
seed always regenerates identical bytes, regardless of worker count.

Run:  python demos/04_dataset_generation.py
"""

import os
import tempfile

import tlsmap

config = tlsmap.parse_config("""
version = 1
transmon.frequency = 7.0e9
transmon.anharmonicity = 180e6
transmon.t1 = 10e-6
transmon.tphi = 1e-6
grid.freq_start = 6.8e9
grid.freq_stop = 7.2e9
grid.freq_step = 4e6
grid.time_stop = 2e-6
grid.time_step = 20e-9
seed = 99
dataset.count = 4
dataset.tls_count = 2
dataset.freq_min = 6.8e9
dataset.freq_max = 7.2e9
dataset.coupling_min = 5e6
dataset.coupling_max = 50e6
dataset.t1_min = 0.5e-6
dataset.t1_max = 10e-6
dataset.tphi_min = 0.5e-6
dataset.tphi_max = 30e-6
""")

out_dir = tempfile.mkdtemp(prefix="tlsmap_demo_")
print(f"generating {config.dataset.count} maps into {out_dir} ...")
manifest = tlsmap.generate_dataset(config, out_dir, workers=2)

for record in tlsmap.read_manifest(manifest):
    omega_t_map = tlsmap.read_map(os.path.join(out_dir, record["file"]))
    labels = ", ".join(f"{f / 1e9:.4f} GHz" for f in record["omega_k"])
    print(f"  {record['file']}: {omega_t_map.values.shape} map, defects at {labels}")
print("done")
