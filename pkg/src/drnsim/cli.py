"""Command-line entry point: ``drnsim {run,sweep,solve-altitude,validate-config,rerun}``.

Exit codes: 0 success, 1 usage, 2 configuration error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .config import Scenario, SimConfig
from .errors import ConfigError, DrnSimError
from .experiments import SweepSpec, solve_altitude, sweep
from .fileio import (RunManifest, default_output, manifest_path, parse_config,
                     parse_sweep_spec, write_results, write_table)
from .montecarlo import run_scenarios

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _scenarios(text: str) -> tuple:
    if text == "both":
        return (Scenario.FREE, Scenario.EH)
    return (Scenario.parse(text),)


def _common(p: argparse.ArgumentParser, trials_default: Optional[int]) -> None:
    p.add_argument("--seed", type=int, default=None, help="base seed (overrides the config)")
    p.add_argument("--trials", type=int, default=trials_default, help="Monte Carlo trials per cell")
    p.add_argument("--out", type=Path, default=None,
                   help="output file (default: $DRNSIM_OUTPUT_DIR/<command>.<format>)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override one config value; repeatable")
    p.add_argument("--jobs", type=int, default=1, help="worker threads")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="drnsim", description="UAV-aided D2D disaster network simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="Monte Carlo estimate at one operating point")
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--scenario", default="both", help="free, eh or both")
    _common(p, 1000)

    p = sub.add_parser("sweep", help="full-factorial sweep over one or two parameters")
    p.add_argument("--spec", type=Path, required=True, help="config file with sweep.* keys")
    _common(p, None)

    p = sub.add_parser("solve-altitude", help="highest altitude meeting an EE threshold")
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--scenario", default="both", help="free, eh or both")
    p.add_argument("--threshold", type=float, required=True, help="EE threshold in bit/J")
    p.add_argument("--h-min", type=float, default=50.0)
    p.add_argument("--h-max", type=float, default=2000.0)
    p.add_argument("--tol", type=float, default=1.0, help="altitude tolerance in m")
    p.add_argument("--densities", default=None,
                   help="comma-separated D2D densities (default: the config value)")
    _common(p, 200)

    p = sub.add_parser("validate-config", help="parse and validate a config file")
    p.add_argument("config", type=Path)
    _common(p, None)

    p = sub.add_parser("rerun", help="repeat a run from its manifest")
    p.add_argument("manifest", type=Path)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--jobs", type=int, default=1)
    return parser


def _load_config(args) -> SimConfig:
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    return parse_config(args.config, overrides)


def _check_trials(n) -> int:
    if n is None or n < 1:
        raise ConfigError("trials", "must be a positive integer")
    return n


# -- executors: take a resolved config and plain params, return what was written

def _exec_run(config: SimConfig, params: dict, out: Path, fmt: str, jobs: int) -> list:
    scenarios = tuple(Scenario.parse(s) for s in params["scenarios"])
    results = run_scenarios(config, scenarios, params["n_trials"], config.seed, jobs)
    manifest = RunManifest.create("run", config, params, [out])
    write_results(results, fmt, out, manifest)
    for s, r in results.items():
        print(f"{s.value:>4}: EE = {r.mean_ee_total:.6g} bit/J +- {r.ci95_half_width:.3g} "
              f"(uplink {r.mean_rate_uplink:.4g} bit/s, D2D {r.mean_rate_d2d:.4g} bit/s, "
              f"{r.n_trials_effective}/{r.n_trials} trials)")
    return [manifest]


def _exec_sweep(config: SimConfig, params: dict, out: Path, fmt: str, jobs: int) -> list:
    axis_2 = tuple(params["axis_2"]) if params.get("axis_2") else None
    spec = SweepSpec(tuple(params["axis_1"]), axis_2, tuple(params["scenarios"]),
                     params["n_trials"], config)
    result = sweep(spec, jobs)
    manifest = RunManifest.create("sweep", config, params, [out])
    write_results(result, fmt, out, manifest)
    print(f"{len(result.cells)} cells over {', '.join(result.axis_names)} -> {out}")
    return [manifest]


def _exec_solve(config: SimConfig, params: dict, out: Path, fmt: str, jobs: int) -> list:
    rows = []
    for density in params["densities"]:
        cfg = config.replace(lambda_d2d=float(density))
        for s in params["scenarios"]:
            h = solve_altitude(cfg, s, params["threshold"], params["h_range"], params["tol"],
                               params["n_trials"])
            rows.append([float(density), Scenario.parse(s).value, params["threshold"], h])
            print(f"lambda_d2d={density:g} {Scenario.parse(s).value:>4}: H* = {h:.1f} m")
    write_table(out, ["lambda_d2d", "scenario", "ee_threshold", "h_star"], rows, fmt)
    return [RunManifest.create("solve-altitude", config, params, [out])]


EXECUTORS = {"run": _exec_run, "sweep": _exec_sweep, "solve-altitude": _exec_solve}


def _finish(manifests: list, out: Path) -> None:
    for m in manifests:
        m.write(manifest_path(out))


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "validate-config":
        overrides = list(args.overrides) + ([f"seed={args.seed}"] if args.seed is not None else [])
        config = parse_config(args.config, overrides)
        print(f"{args.config}: ok (hash {config.config_hash()[:12]})")
        return EXIT_OK

    if cmd == "rerun":
        manifest = RunManifest.read(args.manifest)
        if manifest.command not in EXECUTORS:
            raise ConfigError("command", f"manifest names unknown command {manifest.command!r}")
        fmt = args.format or (Path(manifest.outputs[0]).suffix.lstrip(".") if manifest.outputs else "csv")
        if fmt not in ("csv", "json"):
            fmt = "csv"
        out = args.out or default_output(manifest.command, fmt)
        config = manifest.sim_config()
        _finish(EXECUTORS[manifest.command](config, manifest.params, out, fmt, args.jobs), out)
        return EXIT_OK

    out = args.out or default_output(cmd, args.format)
    if cmd == "run":
        config = _load_config(args)
        params = {"scenarios": [s.value for s in _scenarios(args.scenario)],
                  "n_trials": _check_trials(args.trials)}
    elif cmd == "sweep":
        spec = parse_sweep_spec(args.spec, args.overrides, args.trials, args.seed)
        config = spec.base_config
        params = {"axis_1": [spec.axis_1[0], list(spec.axis_1[1])],
                  "axis_2": [spec.axis_2[0], list(spec.axis_2[1])] if spec.axis_2 else None,
                  "scenarios": [s.value for s in spec.scenarios], "n_trials": spec.n_trials}
    else:
        config = _load_config(args)
        if args.densities:
            try:
                densities = [float(d) for d in args.densities.split(",") if d.strip()]
            except ValueError:
                raise ConfigError("densities", f"cannot parse {args.densities!r}") from None
        else:
            densities = [config.lambda_d2d]
        params = {"scenarios": [s.value for s in _scenarios(args.scenario)],
                  "n_trials": _check_trials(args.trials), "threshold": args.threshold,
                  "h_range": [args.h_min, args.h_max], "tol": args.tol, "densities": densities}
    if args.jobs < 1:
        raise ConfigError("jobs", "must be a positive integer")
    _finish(EXECUTORS[cmd](config, params, out, args.format, args.jobs), out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"drnsim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DrnSimError, OSError, ValueError) as exc:
        print(f"drnsim: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
