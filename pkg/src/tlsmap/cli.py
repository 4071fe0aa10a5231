"""Command-line interface.

Subcommands: ``map`` (generate one population map), ``dataset`` (generate a
labeled corpus), ``estimate`` (recover defect parameters from a map file),
``steady`` (compare the simulated steady state against the closed forms).

Exit codes: 0 success, 1 validation/config problem, 2 I/O problem,
3 numerical failure (calibration or degenerate steady state).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import analytics
from .config import load_config
from .dataset import generate_dataset
from .errors import (CalibrationError, ConfigError, DegenerateSteadyStateError,
                     MapFormatError, ValidationError)
from .lindblad import liouvillian, steady_state
from .mapfile import read_map, write_map
from .model import DrivePulse, build_operators, hamiltonian_rwa
from .protocol import calibrate_pulse_b, generate_map, qubit_population

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_NUMERICAL = 3


def _add_common(parser):
    parser.add_argument("--config", help="configuration file path")
    parser.add_argument("--out", help="output path")
    parser.add_argument("--seed", type=int, default=None, help="override config seed")
    parser.add_argument("--threads", type=int, default=1, help="worker count")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tlsmap",
        description="Two-tone defect spectroscopy maps for fixed-frequency transmons")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("map", "calibrate the probe and generate one population map"),
        ("dataset", "generate a labeled dataset of maps"),
        ("estimate", "extract defect parameter estimates from a map file"),
        ("steady", "steady-state population: simulation vs closed forms"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "estimate":
            p.add_argument("mapfile", help="map file to analyze")
    return parser


def _require(value, what):
    if not value:
        raise ConfigError(f"this command requires {what}")
    return value


def cmd_map(args) -> int:
    config = load_config(_require(args.config, "--config"))
    cal = calibrate_pulse_b(config.spec, t_pi=config.pulse_b_duration,
                            amplitude=config.pulse_b_amplitude)
    shift = cal.omega_tilde_q - config.spec.transmon.frequency
    print(f"probe calibrated at {cal.omega_tilde_q / 1e9:.6f} GHz "
          f"({shift / 1e6:+.3f} MHz from bare), "
          f"t_pi = {cal.t_pi * 1e9:.0f} ns, amplitude = {cal.amplitude / 1e6:.2f} MHz")
    omega_t_map = generate_map(config.spec, cal, config.grid,
                               pulse_a_amplitude=config.pulse_a_amplitude,
                               threads=max(args.threads, 1))
    out = _require(args.out, "--out")
    write_map(omega_t_map, out)
    print(f"wrote {omega_t_map.values.shape[0]} x {omega_t_map.values.shape[1]} "
          f"map to {out}")
    return EXIT_OK


def cmd_dataset(args) -> int:
    config = load_config(_require(args.config, "--config"))
    out = _require(args.out, "--out")
    manifest = generate_dataset(config, out, seed=args.seed,
                                workers=max(args.threads, 1))
    print(f"wrote dataset manifest {manifest}")
    return EXIT_OK


def cmd_estimate(args) -> int:
    omega_t_map = read_map(args.mapfile)
    features = analytics.extract_features(omega_t_map)
    estimates = analytics.estimate_tls(features, omega_t_map.spec.transmon,
                                       omega_t_map.pulse_a_amplitude)
    report = {
        "mapfile": args.mapfile,
        "features": [{"center_frequency": f.center_frequency,
                      "oscillation_frequency": f.oscillation_frequency,
                      "contrast": f.contrast, "kind": f.kind} for f in features],
        "estimates": [{"frequency": e.frequency, "coupling": e.coupling,
                       "residual": e.residual, "converged": e.converged}
                      for e in estimates],
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
    if not estimates:
        print("no defect features detected")
    for e in estimates:
        flag = "" if e.converged else "  [did not converge]"
        print(f"defect at {e.frequency / 1e9:.6f} GHz, "
              f"coupling {e.coupling / 1e6:.2f} MHz, residual {e.residual:.2e}{flag}")
    return EXIT_OK


def cmd_steady(args) -> int:
    config = load_config(_require(args.config, "--config"))
    spec = config.spec
    if spec.n_tls == 0:
        raise ConfigError("steady-state comparison needs at least one defect")
    tls = spec.tls[0]
    derived = analytics.derived_quantities(spec, 0)
    drive_freq = analytics.freq_01(tls.frequency, tls.coupling, derived.delta)
    amp = config.pulse_a_amplitude

    ops = build_operators(spec)
    h = hamiltonian_rwa(spec, DrivePulse(amp, drive_freq, 0.0), ops)
    rho = steady_state(liouvillian(spec, h, ops))
    simulated = qubit_population(rho, spec)

    rates = (spec.transmon.gamma, spec.transmon.kappa, tls.gamma, tls.kappa)
    closed_form = analytics.steady_population_approx(tls.coupling, amp,
                                                     derived.delta, rates)
    closed_form_dressed = analytics.steady_population_approx(
        tls.coupling, amp, derived.delta_tilde, rates)
    c1, c2, c3 = analytics.rate_coefficients(spec, amp, derived.delta)
    rate_model = analytics.rate_steady_full(c1, c2, c3, spec.transmon.gamma, tls.gamma)

    report = {
        "drive_frequency": drive_freq,
        "amplitude": amp,
        "simulated": simulated,
        "closed_form": closed_form,
        "closed_form_dressed_detuning": closed_form_dressed,
        "rate_model": rate_model,
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
    print(f"drive at {drive_freq / 1e9:.6f} GHz, amplitude {amp / 1e6:.2f} MHz")
    print(f"  simulated steady population           {simulated:.5f}")
    print(f"  closed form (bare detuning)           {closed_form:.5f}")
    print(f"  closed form (dressed detuning)        {closed_form_dressed:.5f}")
    print(f"  rate model (exact fixed point)        {rate_model:.5f}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"map": cmd_map, "dataset": cmd_dataset,
                "estimate": cmd_estimate, "steady": cmd_steady}
    try:
        return handlers[args.command](args)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (MapFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (CalibrationError, DegenerateSteadyStateError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
