"""Readers for the map container and dataset manifest formats.

Kept independent of the simulator package on purpose: this side of the fence
only ever touches the documented file formats (magic ``WTMAP1\\n``, one JSON
header line, row-major little-endian float64 payload; JSONL manifests).
"""

from __future__ import annotations

import json
import os

import numpy as np

MAGIC = b"WTMAP1\n"
SUPPORTED_VERSION = 1


class MapReadError(ValueError):
    """Map file is malformed or unsupported."""


def read_map_values(path):
    """(values, header) from one map file; values shaped [n_freq, n_time]."""
    with open(path, "rb") as fh:
        if fh.read(len(MAGIC)) != MAGIC:
            raise MapReadError(f"{path}: bad magic, not a map file")
        header_line = fh.readline()
        if not header_line.endswith(b"\n"):
            raise MapReadError(f"{path}: truncated header")
        try:
            header = json.loads(header_line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise MapReadError(f"{path}: unreadable header: {exc}") from exc
        if header.get("format_version") != SUPPORTED_VERSION:
            raise MapReadError(f"{path}: unsupported format version "
                               f"{header.get('format_version')!r}")
        n_freq, n_time = header["n_freq"], header["n_time"]
        payload = fh.read()
    if len(payload) != 8 * n_freq * n_time:
        raise MapReadError(f"{path}: payload is {len(payload)} bytes, "
                           f"expected {8 * n_freq * n_time}")
    values = np.frombuffer(payload, dtype="<f8").reshape(n_freq, n_time)
    return values.astype(np.float32), header


def read_manifest(path):
    """Manifest records with absolute file paths attached."""
    base = os.path.dirname(os.path.abspath(path))
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            record["path"] = os.path.join(base, record["file"])
            if not os.path.exists(record["path"]):
                raise FileNotFoundError(
                    f"manifest references missing file {record['path']}")
            records.append(record)
    if not records:
        raise MapReadError(f"{path}: empty manifest")
    return records
