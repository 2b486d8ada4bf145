"""Command-line runner: ``nusim {vacuum,invert,concurrence} [options]``.

Values from ``--config`` are read first; explicit flags override them. The CSV
goes to ``--out`` or, without it, to standard output. Exit status is 2 on any
configuration error.
"""
from __future__ import annotations

import argparse
import sys

from .experiment import (
    EXPERIMENTS,
    MODES,
    ConfigError,
    build_config,
    coerce,
    read_config_file,
    run_experiment,
)

# flag dest -> config key
_FLAG_KEYS = {
    "n": "n",
    "theta_nu": "theta_nu",
    "dm2": "dm2",
    "energy": "energy",
    "t_max": "t_max",
    "points": "points",
    "mode": "mode",
    "shots": "shots",
    "steps": "steps",
    "seed": "seed",
    "noise": "noise",
    "out": "out",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nusim",
        description="Simulate collective neutrino oscillation circuits and write CSV time series.",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", metavar="PATH", help="flat key = value config file")
    parser.add_argument("--n", metavar="INT", help="number of neutrinos")
    parser.add_argument("--theta-nu", metavar="F", help="vacuum mixing angle [rad]")
    parser.add_argument("--pair-angle", metavar="p:q:F", action="append", default=[],
                        help="coupling angle between neutrinos p and q (1-based); repeatable")
    parser.add_argument("--dm2", metavar="F", help="mass-squared difference [eV^2]")
    parser.add_argument("--energy", metavar="F", help="neutrino energy [GeV]")
    parser.add_argument("--t-max", metavar="F", help="end of the grid (1/eta, or km for vacuum)")
    parser.add_argument("--points", metavar="INT", help="number of grid points")
    parser.add_argument("--mode", choices=MODES)
    parser.add_argument("--shots", metavar="INT")
    parser.add_argument("--steps", metavar="INT", help="Trotter steps")
    parser.add_argument("--seed", metavar="INT")
    parser.add_argument("--noise", metavar="p1,p2,pr",
                        help="depolarizing 1q, depolarizing 2q, readout flip probabilities")
    parser.add_argument("--hardware-swaps", action="store_true",
                        help="route non-adjacent pairs through SWAP gates on a linear chain")
    parser.add_argument("--out", metavar="PATH", help="CSV output path (default: stdout)")
    return parser


def config_from_args(args: argparse.Namespace):
    values = read_config_file(args.config) if args.config else {}
    values["experiment"] = args.experiment
    for dest, key in _FLAG_KEYS.items():
        raw = getattr(args, dest)
        if raw is not None:
            k, v = coerce(key, str(raw), f"--{dest.replace('_', '-')}: ")
            values[k] = v
    for item in args.pair_angle:
        _, v = coerce("pair_angle", item, "--pair-angle: ")
        values["pair_angle"] = {**values.get("pair_angle", {}), **v}
    if args.hardware_swaps:
        values["hardware_swaps"] = True
    return build_config(values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except ConfigError as exc:
        print(f"nusim: config error: {exc}", file=sys.stderr)
        return 2
    report = run_experiment(config)
    if not config.out_path:
        sys.stdout.write(report.to_csv())
    return 0


if __name__ == "__main__":
    sys.exit(main())
