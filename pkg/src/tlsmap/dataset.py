"""Reproducible labeled-map dataset generation.

Every map gets its own PRNG stream derived from (root seed, map index), so
the output is byte-identical regardless of how many workers run, and any
single map can be regenerated in isolation.  Labels are sorted ascending by
defect frequency to give downstream regressors a permutation-free target.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from .config import Config, DatasetRanges
from .mapfile import write_map, PRNG_NAME
from .model import SystemSpec, TlsParams
from .protocol import calibrate_pulse_b, generate_map

MANIFEST_NAME = "manifest.jsonl"


def sample_spec(base: SystemSpec, ranges: DatasetRanges, seed: int, index: int) -> SystemSpec:
    """Draw one system from the uniform parameter ranges, labels sorted by
    frequency."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    draws = []
    for _ in range(ranges.tls_count):
        draws.append({
            "frequency": rng.uniform(ranges.freq_min, ranges.freq_max),
            "coupling": rng.uniform(ranges.coupling_min, ranges.coupling_max),
            "t1": rng.uniform(ranges.t1_min, ranges.t1_max),
            "tphi": rng.uniform(ranges.tphi_min, ranges.tphi_max),
        })
    draws.sort(key=lambda d: d["frequency"])
    tls = tuple(TlsParams.from_times(d["frequency"], d["coupling"],
                                     t1=d["t1"], tphi=d["tphi"]) for d in draws)
    return replace(base, tls=tls)


def _generate_one(args):
    (index, config_spec, ranges, seed, grid, amp_a, amp_b, t_pi, out_dir) = args
    spec = sample_spec(config_spec, ranges, seed, index)
    # no quality guard here: strongly hybridized draws yield an imperfect
    # probe, which is legitimate physics for a labeled training sample
    cal = calibrate_pulse_b(spec, t_pi=t_pi, amplitude=amp_b, min_population=0.0)
    omega_t_map = generate_map(spec, cal, grid, pulse_a_amplitude=amp_a)
    filename = f"map_{index:05d}.wtmap"
    write_map(omega_t_map, os.path.join(out_dir, filename))
    record = {
        "file": filename,
        "index": index,
        "seed": seed,
        "prng": PRNG_NAME,
        "omega_k": [t.frequency for t in spec.tls],
        "coupling": [t.coupling for t in spec.tls],
        "t1": [1.0 / t.gamma if t.gamma else None for t in spec.tls],
        "tphi": [2.0 / t.kappa if t.kappa else None for t in spec.tls],
    }
    return index, record


def generate_dataset(config: Config, out_dir, seed: int = None,
                     workers: int = 1) -> str:
    """Generate `config.dataset.count` labeled maps plus a manifest.

    Returns the manifest path.  Deterministic for a given seed; workers only
    change wall time.
    """
    ranges = config.dataset
    if ranges is None:
        raise ValueError("config has no dataset section")
    if seed is None:
        seed = config.seed
    os.makedirs(out_dir, exist_ok=True)

    base = replace(config.spec, tls=())
    jobs = [(i, base, ranges, seed, config.grid, config.pulse_a_amplitude,
             config.pulse_b_amplitude, config.pulse_b_duration, out_dir)
            for i in range(ranges.count)]

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_generate_one, jobs, chunksize=1))
    else:
        results = [_generate_one(job) for job in jobs]

    results.sort(key=lambda pair: pair[0])
    manifest_path = os.path.join(out_dir, MANIFEST_NAME)
    with open(manifest_path, "w", encoding="utf-8") as fh:
        for _, record in results:
            fh.write(json.dumps(record, separators=(",", ":")) + "\n")
    return manifest_path


def read_manifest(path):
    """List of manifest records; verifies every referenced file exists."""
    records = []
    base = os.path.dirname(os.path.abspath(path))
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            target = os.path.join(base, record["file"])
            if not os.path.exists(target):
                raise FileNotFoundError(f"manifest references missing file {target}")
            records.append(record)
    return records
