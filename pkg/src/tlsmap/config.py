"""Line-based key = value configuration files.

The format is deliberately plain so diagnostics can name the exact line and
key: one assignment per line, ``#`` comments, dotted keys for grouping,
defects indexed as ``tls.<k>.<field>``.  Unknown keys are rejected.  Times
are seconds (``inf`` allowed for coherence times), frequencies Hz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import constants as c
from .errors import ConfigError
from .model import SystemSpec, TransmonParams, TlsParams
from .protocol import MapGrid

_SCALARS = {
    "version": int,
    "seed": int,
    "transmon.frequency": float,
    "transmon.anharmonicity": float,
    "transmon.t1": float,
    "transmon.tphi": float,
    "transmon.levels": int,
    "grid.freq_start": float,
    "grid.freq_stop": float,
    "grid.freq_step": float,
    "grid.time_stop": float,
    "grid.time_step": float,
    "pulse_a.amplitude": float,
    "pulse_b.amplitude": float,
    "pulse_b.duration": float,
    "dataset.count": int,
    "dataset.tls_count": int,
    "dataset.freq_min": float,
    "dataset.freq_max": float,
    "dataset.coupling_min": float,
    "dataset.coupling_max": float,
    "dataset.t1_min": float,
    "dataset.t1_max": float,
    "dataset.tphi_min": float,
    "dataset.tphi_max": float,
}

_TLS_FIELDS = {"frequency": float, "coupling": float, "drive_factor": float,
               "t1": float, "tphi": float}

_REQUIRED = ("version", "transmon.frequency", "transmon.anharmonicity")


@dataclass(frozen=True)
class DatasetRanges:
    """Uniform sampling ranges for dataset generation."""

    count: int
    tls_count: int
    freq_min: float = c.DEFAULT_FREQ_START
    freq_max: float = c.DEFAULT_FREQ_STOP
    coupling_min: float = 5e6
    coupling_max: float = 50e6
    t1_min: float = 0.5e-6
    t1_max: float = 10e-6
    tphi_min: float = 0.5e-6
    tphi_max: float = 30e-6

    def __post_init__(self):
        if self.count < 1:
            raise ConfigError("dataset.count must be >= 1", key="dataset.count")
        if self.tls_count < 0:
            raise ConfigError("dataset.tls_count must be >= 0", key="dataset.tls_count")
        for name in ("freq", "coupling", "t1", "tphi"):
            lo = getattr(self, name + "_min")
            hi = getattr(self, name + "_max")
            if not (0 < lo <= hi):
                raise ConfigError(f"dataset {name} range [{lo}, {hi}] is invalid",
                                  key=f"dataset.{name}_min")


@dataclass(frozen=True)
class Config:
    """Parsed configuration: system, grid, pulse amplitudes, seed, dataset ranges."""

    spec: SystemSpec
    grid: MapGrid
    pulse_a_amplitude: float = c.DEFAULT_PULSE_A_AMPLITUDE
    pulse_b_amplitude: float = c.DEFAULT_PULSE_B_AMPLITUDE
    pulse_b_duration: float = c.DEFAULT_T_PI
    seed: int = 0
    dataset: DatasetRanges = None
    raw: dict = field(default_factory=dict, repr=False)


def _parse_lines(text: str):
    values, lines = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError("empty key or value", key=key or None, line=lineno)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno)
        values[key] = value
        lines[key] = lineno
    return values, lines


def _convert(key, text, kind, lineno):
    try:
        if kind is int:
            return int(text)
        value = float(text)
    except ValueError as exc:
        raise ConfigError(f"cannot parse {text!r} as {kind.__name__}",
                          key=key, line=lineno) from exc
    if math.isnan(value):
        raise ConfigError("value is NaN", key=key, line=lineno)
    return value


def parse_config(text: str) -> Config:
    values, lines = _parse_lines(text)

    converted = {}
    tls_entries = {}
    for key, raw_value in values.items():
        lineno = lines[key]
        if key in _SCALARS:
            converted[key] = _convert(key, raw_value, _SCALARS[key], lineno)
            continue
        parts = key.split(".")
        if len(parts) == 3 and parts[0] == "tls":
            if not parts[1].isdigit():
                raise ConfigError("defect index must be an integer", key=key, line=lineno)
            if parts[2] not in _TLS_FIELDS:
                raise ConfigError("unknown defect field", key=key, line=lineno)
            idx = int(parts[1])
            tls_entries.setdefault(idx, {})[parts[2]] = _convert(
                key, raw_value, _TLS_FIELDS[parts[2]], lineno)
            continue
        raise ConfigError("unknown key", key=key, line=lineno)

    for req in _REQUIRED:
        if req not in converted:
            raise ConfigError("missing required key", key=req)
    if converted["version"] != 1:
        raise ConfigError(f"unsupported config version {converted['version']}",
                          key="version")

    try:
        transmon = TransmonParams.from_times(
            converted["transmon.frequency"],
            converted["transmon.anharmonicity"],
            t1=converted.get("transmon.t1", math.inf),
            tphi=converted.get("transmon.tphi", math.inf),
            n_levels=converted.get("transmon.levels", 3),
        )
        tls = []
        for idx in sorted(tls_entries):
            entry = tls_entries[idx]
            if "frequency" not in entry or "coupling" not in entry:
                raise ConfigError("defect needs at least frequency and coupling",
                                  key=f"tls.{idx}")
            tls.append(TlsParams.from_times(
                entry["frequency"], entry["coupling"],
                t1=entry.get("t1", math.inf), tphi=entry.get("tphi", math.inf),
                drive_factor=entry.get("drive_factor", 0.0)))
        spec = SystemSpec(transmon, tuple(tls))
        grid = MapGrid.regular(
            converted.get("grid.freq_start", c.DEFAULT_FREQ_START),
            converted.get("grid.freq_stop", c.DEFAULT_FREQ_STOP),
            converted.get("grid.freq_step", c.DEFAULT_FREQ_STEP),
            converted.get("grid.time_stop", c.DEFAULT_TIME_STOP),
            converted.get("grid.time_step", c.DEFAULT_TIME_STEP),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    dataset = None
    if any(k.startswith("dataset.") for k in converted):
        if "dataset.count" not in converted or "dataset.tls_count" not in converted:
            raise ConfigError("dataset section needs count and tls_count",
                              key="dataset.count")
        kwargs = {k.split(".", 1)[1]: v for k, v in converted.items()
                  if k.startswith("dataset.")}
        dataset = DatasetRanges(**kwargs)

    return Config(
        spec=spec,
        grid=grid,
        pulse_a_amplitude=converted.get("pulse_a.amplitude", c.DEFAULT_PULSE_A_AMPLITUDE),
        pulse_b_amplitude=converted.get("pulse_b.amplitude", c.DEFAULT_PULSE_B_AMPLITUDE),
        pulse_b_duration=converted.get("pulse_b.duration", c.DEFAULT_T_PI),
        seed=converted.get("seed", 0),
        dataset=dataset,
        raw=converted,
    )


def load_config(path) -> Config:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
