import json

import numpy as np
import pytest


def write_map_file(path, values):
    """Emit a map container the way the simulator writes it."""
    values = np.asarray(values, dtype="<f8")
    n_freq, n_time = values.shape
    header = {
        "format_version": 1,
        "prng": "numpy-pcg64",
        "n_freq": n_freq,
        "n_time": n_time,
        "omega_d_axis": list(np.linspace(6.8e9, 7.2e9, n_freq)),
        "tA_axis": list(np.linspace(0, 2e-6, n_time)),
    }
    with open(path, "wb") as fh:
        fh.write(b"WTMAP1\n")
        fh.write(json.dumps(header, separators=(",", ":")).encode())
        fh.write(b"\n")
        fh.write(values.tobytes())


def synthetic_corpus(directory, count=24, shape=(24, 24), n_tls=2, seed=0):
    """Labeled toy maps: one bright row per defect, row index tied to the
    label, so a tiny network can learn the mapping quickly."""
    rng = np.random.default_rng(seed)
    manifest = directory / "manifest.jsonl"
    with open(manifest, "w", encoding="utf-8") as fh:
        for i in range(count):
            freqs = np.sort(rng.uniform(6.8e9, 7.2e9, size=n_tls))
            values = np.full(shape, 0.9)
            for f in freqs:
                row = int((f - 6.8e9) / 0.4e9 * (shape[0] - 1))
                values[row] = 0.1
            name = f"map_{i:05d}.wtmap"
            write_map_file(directory / name, values)
            fh.write(json.dumps({"file": name, "omega_k": list(freqs),
                                 "index": i, "seed": seed}) + "\n")
    return manifest


@pytest.fixture
def toy_manifest(tmp_path):
    return synthetic_corpus(tmp_path)
