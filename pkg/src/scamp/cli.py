"""Command-line front end: sweep, estimate, figure and selfcheck.

Physics parameters come from a flat INI-style config file (sections
``amplifier``, ``detector.d0`` .. ``detector.db``, ``sweep``, ``output``)
plus command-line overrides; unknown keys or sections are errors, since a
silently ignored typo in a physics parameter is the costliest failure mode.
The only environment variable honored is SCAMP_WORKERS (worker count).

Exit codes: 0 success, 2 configuration error, 3 runtime error,
4 selfcheck threshold failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys

import numpy as np

from . import params
from .errors import ConfigError, InsufficientSignalError, InvalidEpsilonError, NeverHeraldedError
from .detectors import DetectorModel
from .montecarlo import DetectorBank
from .selfcheck import run_selfcheck
from .sweep import (
    Dataset,
    SweepSpec,
    dataset_to_csv,
    dataset_to_json,
    read_count_table,
    reproduce_figure,
    run_estimator,
    run_sweep,
    write_dataset,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_SELFCHECK = 4

_DETECTOR_SECTIONS = ("detector.d0", "detector.d1", "detector.da", "detector.db")
_SCHEMA = {
    "amplifier": {"comparison_reflectivity", "subtraction_transmission"},
    "sweep": {
        "alpha_sq",
        "n_states",
        "mode",
        "n_pulses",
        "seed",
        "prf",
        "epsilon",
        "phase_points",
    },
    "output": {"path", "format"},
}
for _section in _DETECTOR_SECTIONS:
    _SCHEMA[_section] = {"efficiency", "loss", "dark_prob", "gate_halfwidth_ns"}


def _parse_alpha_grid(text: str) -> tuple[float, ...]:
    """Either a comma list ("0.1,0.5,1") or start:stop:count ("0.1:2.9:29")."""
    text = text.strip()
    if ":" in text:
        pieces = text.split(":")
        if len(pieces) != 3:
            raise ConfigError(f"alpha_sq range must be start:stop:count, got {text!r}")
        start, stop, count = float(pieces[0]), float(pieces[1]), int(pieces[2])
        if count < 1:
            raise ConfigError("alpha_sq range count must be >= 1")
        return tuple(float(a) for a in np.linspace(start, stop, count))
    return tuple(float(piece) for piece in text.split(","))


def _detector_from_section(section) -> DetectorModel:
    return DetectorModel(
        efficiency=section.getfloat("efficiency", params.DETECTION_EFFICIENCY),
        loss_transmission=section.getfloat(
            "loss", params.FROZEN_OPTICAL_LOSS * params.SIGNAL_GATE_RETENTION
        ),
        dark_prob_per_gate=section.getfloat("dark_prob", params.DARK_PROB_PER_GATE),
        gate_halfwidth=section.getfloat("gate_halfwidth_ns", 2.0) * 1e-9,
    )


def load_sweep_config(path: str | None) -> dict:
    """Read and validate the config file into keyword arguments for SweepSpec."""
    parser = configparser.ConfigParser()
    if path is not None:
        read = parser.read(path)
        if not read:
            raise ConfigError(f"cannot read config file {path!r}")
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")

    kwargs: dict = {}
    if parser.has_section("amplifier"):
        amp = parser["amplifier"]
        if "comparison_reflectivity" in amp:
            kwargs["comparison_reflectivity"] = amp.getfloat("comparison_reflectivity")
        if "subtraction_transmission" in amp:
            kwargs["subtraction_transmission"] = amp.getfloat("subtraction_transmission")
    if any(parser.has_section(section) for section in _DETECTOR_SECTIONS):
        dets = {}
        for section in _DETECTOR_SECTIONS:
            name = section.split(".", 1)[1]
            if parser.has_section(section):
                dets[name] = _detector_from_section(parser[section])
            else:
                dets[name] = params.default_detector()
        kwargs["detectors"] = DetectorBank(**dets)
    if parser.has_section("sweep"):
        sweep = parser["sweep"]
        if "alpha_sq" in sweep:
            kwargs["alpha_sq_grid"] = _parse_alpha_grid(sweep["alpha_sq"])
        if "n_states" in sweep:
            kwargs["n_states_list"] = tuple(int(n) for n in sweep["n_states"].split(","))
        if "mode" in sweep:
            kwargs["mode"] = sweep["mode"].strip()
        if "n_pulses" in sweep:
            kwargs["n_pulses"] = sweep.getint("n_pulses")
        if "seed" in sweep:
            kwargs["seed"] = sweep.getint("seed")
        if "prf" in sweep:
            kwargs["prf"] = sweep.getfloat("prf")
        if "epsilon" in sweep:
            raw = sweep["epsilon"].strip()
            kwargs["epsilon"] = None if raw == "auto" else float(raw)
        if "phase_points" in sweep:
            kwargs["phase_points"] = sweep.getint("phase_points")
    if parser.has_section("output"):
        out = parser["output"]
        if "path" in out:
            kwargs["output_path"] = out["path"]
        if "format" in out:
            kwargs["output_format"] = out["format"].strip()
    return kwargs


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get("SCAMP_WORKERS")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"SCAMP_WORKERS must be an integer, got {env!r}")
        if value < 1:
            raise ConfigError(f"SCAMP_WORKERS must be >= 1, got {value}")
        return value
    return 1


def _emit(dataset: Dataset, path: str | None, output_format: str) -> None:
    if path is None:
        text = dataset_to_csv(dataset) if output_format == "csv" else dataset_to_json(dataset)
        sys.stdout.write(text)
    else:
        write_dataset(dataset, path, output_format)
        print(f"wrote {len(dataset.rows)} rows to {path}")


def _cmd_sweep(args) -> int:
    try:
        kwargs = load_sweep_config(args.config)
        if args.mode is not None:
            kwargs["mode"] = args.mode
        if args.seed is not None:
            kwargs["seed"] = args.seed
        if args.output is not None:
            kwargs["output_path"] = args.output
        if args.format is not None:
            kwargs["output_format"] = args.format
        if "alpha_sq_grid" not in kwargs:
            kwargs["alpha_sq_grid"] = params.FIG3_ALPHA_SQ_GRID
        if "n_states_list" not in kwargs:
            kwargs["n_states_list"] = (2, 4, 8)
        spec = SweepSpec(**kwargs)
        workers = _workers(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        dataset = run_sweep(spec, workers=workers)
        _emit(dataset, spec.output_path, spec.output_format)
    except (NeverHeraldedError, InsufficientSignalError, InvalidEpsilonError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _cmd_estimate(args) -> int:
    try:
        counts = read_count_table(args.counts)
        if args.g2a2 <= 0.0:
            raise ConfigError("--g2a2 must be > 0")
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report = run_estimator(
            counts,
            g2a2=args.g2a2,
            eta_l=args.eta_l,
            vacuum_denominator=args.vacuum_denominator,
        )
    except (InsufficientSignalError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"signal pulses      N_sig = {report['n_sig']:.6f}")
    print(f"vacuum pulses      N_vac = {report['n_vac']:.6f}  ({args.vacuum_denominator} denominator)")
    print(f"signal weight      P(sig) = {report['p_sig']:.9f}")
    print(f"vacuum weight      P(vac) = {report['p_vac']:.9f}")
    print(f"fidelity (standard vacuum overlap) = {report['fidelity_standard']:.9f}")
    print(f"fidelity (doubled vacuum overlap)  = {report['fidelity_doubled']:.9f}")
    if args.output is not None:
        try:
            with open(args.output, "w") as fh:
                json.dump(report, fh, indent=2)
                fh.write("\n")
        except OSError as exc:
            print(f"runtime error: cannot write {args.output!r}: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
        print(f"wrote report to {args.output}")
    return EXIT_OK


def _cmd_figure(args) -> int:
    try:
        grid = _parse_alpha_grid(args.alpha_sq) if args.alpha_sq else None
        detectors = None
        if args.config is not None:
            detectors = load_sweep_config(args.config).get("detectors")
        dataset = reproduce_figure(
            args.id,
            optical_loss=args.loss,
            alpha_sq_grid=grid,
            detectors=detectors,
            phase_points=args.phase_points,
        )
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        _emit(dataset, args.output, args.format)
    except OSError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _cmd_selfcheck(args) -> int:
    return EXIT_OK if run_selfcheck() else EXIT_SELFCHECK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scamp",
        description="Coherent-state comparison amplifier: sweeps, estimators and figure datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="evaluate a (n_states, alpha_sq) grid")
    p_sweep.add_argument("--config", help="INI config file")
    p_sweep.add_argument("--mode", choices=["analytic", "montecarlo", "both"])
    p_sweep.add_argument("--seed", type=int)
    p_sweep.add_argument("--output", help="output path (default: stdout)")
    p_sweep.add_argument("--format", choices=["csv", "json"])
    p_sweep.add_argument("--workers", type=int, help="worker threads (default: SCAMP_WORKERS or 1)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_est = sub.add_parser("estimate", help="estimate output fidelity from a count table")
    p_est.add_argument("--counts", required=True, help="count table file (JSON or single-row CSV)")
    p_est.add_argument("--g2a2", type=float, required=True, help="reference mean photon number")
    p_est.add_argument(
        "--eta-l",
        type=float,
        default=params.DETECTION_EFFICIENCY * params.SIGNAL_GATE_RETENTION,
        help="detection efficiency times transmission at the analyzers",
    )
    p_est.add_argument(
        "--vacuum-denominator",
        choices=["doubled", "per-port"],
        default="doubled",
        help="vacuum-class inversion convention",
    )
    p_est.add_argument("--output", help="also write the report as JSON")
    p_est.set_defaults(func=_cmd_estimate)

    p_fig = sub.add_parser("figure", help="emit a model-curve dataset for a known figure layout")
    p_fig.add_argument("--id", required=True, help="fig3a | fig3b | fig3c | fig3d | fig4")
    p_fig.add_argument("--config", help="INI config file (detector blocks are honored)")
    p_fig.add_argument("--loss", type=float, default=params.FROZEN_OPTICAL_LOSS)
    p_fig.add_argument("--alpha-sq", help="grid override: comma list or start:stop:count")
    p_fig.add_argument("--phase-points", type=int, default=256)
    p_fig.add_argument("--output", help="output path (default: stdout)")
    p_fig.add_argument("--format", choices=["csv", "json"], default="csv")
    p_fig.set_defaults(func=_cmd_figure)

    p_check = sub.add_parser("selfcheck", help="run the built-in sanity thresholds")
    p_check.set_defaults(func=_cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
