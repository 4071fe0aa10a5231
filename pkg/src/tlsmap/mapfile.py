"""Binary container for population maps.

Layout: the magic bytes ``WTMAP1\\n``, one line of UTF-8 JSON holding the
axes, the system and calibration snapshots, and the format version, then the
map values as row-major little-endian float64 (rows follow the frequency
axis).  JSON serializes doubles through repr, so read(write(m)) reproduces
the map bit for bit.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import MapFormatError
from .model import SystemSpec, TransmonParams, TlsParams
from .protocol import MapGrid, OmegaTMap, PulseBCalibration

MAGIC = b"WTMAP1\n"
FORMAT_VERSION = 1
PRNG_NAME = "numpy-pcg64"    # pinned so datasets regenerate identically


def spec_to_dict(spec: SystemSpec) -> dict:
    t = spec.transmon
    return {
        "transmon": {"frequency": t.frequency, "anharmonicity": t.anharmonicity,
                     "gamma": t.gamma, "kappa": t.kappa, "n_levels": t.n_levels},
        "tls": [{"frequency": k.frequency, "coupling": k.coupling,
                 "drive_factor": k.drive_factor, "gamma": k.gamma, "kappa": k.kappa}
                for k in spec.tls],
    }


def spec_from_dict(data: dict) -> SystemSpec:
    t = data["transmon"]
    return SystemSpec(
        TransmonParams(frequency=t["frequency"], anharmonicity=t["anharmonicity"],
                       gamma=t["gamma"], kappa=t["kappa"], n_levels=t["n_levels"]),
        tuple(TlsParams(frequency=k["frequency"], coupling=k["coupling"],
                        drive_factor=k["drive_factor"], gamma=k["gamma"],
                        kappa=k["kappa"])
              for k in data["tls"]),
    )


def write_map(omega_t_map: OmegaTMap, path) -> None:
    grid = omega_t_map.grid
    cal = omega_t_map.calibration
    header = {
        "format_version": FORMAT_VERSION,
        "prng": PRNG_NAME,
        "n_freq": len(grid.omega_d_axis),
        "n_time": len(grid.tA_axis),
        "omega_d_axis": [float(f) for f in grid.omega_d_axis],
        "tA_axis": [float(t) for t in grid.tA_axis],
        "spec": spec_to_dict(omega_t_map.spec),
        "calibration": {"omega_tilde_q": cal.omega_tilde_q, "t_pi": cal.t_pi,
                        "amplitude": cal.amplitude},
        "pulse_a_amplitude": omega_t_map.pulse_a_amplitude,
    }
    payload = np.ascontiguousarray(omega_t_map.values, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(json.dumps(header, separators=(",", ":")).encode("utf-8"))
        fh.write(b"\n")
        fh.write(payload)


def read_map(path) -> OmegaTMap:
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise MapFormatError(f"bad magic {magic!r}; not a map file")
        header_line = fh.readline()
        if not header_line.endswith(b"\n"):
            raise MapFormatError("truncated header line")
        try:
            header = json.loads(header_line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise MapFormatError(f"unreadable header: {exc}") from exc
        if header.get("format_version") != FORMAT_VERSION:
            raise MapFormatError(f"unsupported format version "
                                 f"{header.get('format_version')!r}")
        n_freq, n_time = header["n_freq"], header["n_time"]
        expected = 8 * n_freq * n_time
        payload = fh.read()
    if len(payload) != expected:
        raise MapFormatError(f"payload is {len(payload)} bytes, expected {expected}")
    values = np.frombuffer(payload, dtype="<f8").reshape(n_freq, n_time)
    grid = MapGrid(np.array(header["omega_d_axis"]), np.array(header["tA_axis"]))
    cal = PulseBCalibration(omega_tilde_q=header["calibration"]["omega_tilde_q"],
                            t_pi=header["calibration"]["t_pi"],
                            amplitude=header["calibration"]["amplitude"])
    return OmegaTMap(values=values.copy(), grid=grid,
                     spec=spec_from_dict(header["spec"]), calibration=cal,
                     pulse_a_amplitude=header["pulse_a_amplitude"])
