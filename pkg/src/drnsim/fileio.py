"""Config files, result files and run manifests.

Config files are flat ``key = value`` text with ``#`` comments. Keys are the
``SimConfig`` field names; ``eta_nlos_db`` and the ``*_dbm`` power keys are
converted to linear scale here and nowhere else.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from . import __version__
from .config import (DB_KEYS, DBM_KEYS, INT_KEYS, OPTIONAL_KEYS, Scenario, SimConfig,
                     db_to_linear, dbm_to_watts)
from .errors import ConfigError, ConfigKeyError
from .experiments import SweepCell, SweepResult, SweepSpec
from .montecarlo import ScenarioResult

CSV_RESULT_FIELDS = ("scenario", "mean_ee", "std_ee", "ci95", "mean_rate_up",
                     "mean_rate_d2d", "n_effective")
SWEEP_PREFIX = "sweep."
OUTPUT_DIR_ENV = "DRNSIM_OUTPUT_DIR"


def read_kv_file(path) -> dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(str(path), "config file not found")
    out = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}", f"expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in out:
            raise ConfigError(key, f"duplicate key at {path}:{lineno}")
        out[key] = value
    return out


def parse_overrides(items: Iterable[str]) -> dict[str, str]:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(item, "override must look like key=value")
        key, value = (part.strip() for part in item.split("=", 1))
        out[key] = value
    return out


def _number(key: str, text: str):
    try:
        if key in INT_KEYS:
            return int(text, 0)
        return float(text)
    except ValueError:
        raise ConfigError(key, f"cannot parse value {text!r}") from None


def convert_fields(raw: Mapping[str, str]) -> dict:
    """Turn raw config strings into ``SimConfig`` field values."""
    fields = {}
    valid = set(SimConfig.keys())
    for key, text in raw.items():
        if key in DB_KEYS:
            # eta multiplies the NLoS share directly, so +20 dB is a factor of 100
            names, value = DB_KEYS[key], db_to_linear(_number(key, text))
        elif key in DBM_KEYS:
            names, value = DBM_KEYS[key], dbm_to_watts(_number(key, text))
        elif key in valid:
            names = (key,)
            if key in OPTIONAL_KEYS and text.lower() in ("none", ""):
                value = None
            else:
                value = _number(key, text)
        else:
            raise ConfigKeyError(key)
        for name in names:
            if name in fields:
                raise ConfigError(key, f"{name} given more than once")
            fields[name] = value
    return fields


def build_config(file_values: Mapping[str, str], overrides: Mapping[str, str]) -> SimConfig:
    merged = convert_fields(file_values)
    merged.update(convert_fields(overrides))
    return SimConfig(**merged)


def parse_config(path=None, overrides: Optional[Iterable[str]] = None) -> SimConfig:
    """Read a config file (or start from defaults) and apply ``key=value`` overrides."""
    raw = read_kv_file(path) if path is not None else {}
    return build_config(raw, parse_overrides(overrides))


def _split_list(text: str) -> list[str]:
    return [t.strip() for t in text.replace(";", ",").split(",") if t.strip()]


def parse_sweep_spec(path, overrides: Optional[Iterable[str]] = None,
                     n_trials: Optional[int] = None, seed: Optional[int] = None) -> SweepSpec:
    """Read a sweep file: a config file plus ``sweep.*`` keys.

    Recognised keys are ``sweep.axis_1``, ``sweep.values_1``,
    ``sweep.axis_2``, ``sweep.values_2`` (comma-separated values),
    ``sweep.scenarios`` and ``sweep.n_trials``.
    """
    raw = read_kv_file(path)
    sweep_raw = {k[len(SWEEP_PREFIX):]: v for k, v in raw.items() if k.startswith(SWEEP_PREFIX)}
    cfg_raw = {k: v for k, v in raw.items() if not k.startswith(SWEEP_PREFIX)}
    known = {"axis_1", "values_1", "axis_2", "values_2", "scenarios", "n_trials"}
    for k in sweep_raw:
        if k not in known:
            raise ConfigKeyError(SWEEP_PREFIX + k)
    ov = parse_overrides(overrides)
    if seed is not None:
        ov["seed"] = str(seed)
    base = build_config(cfg_raw, ov)
    if "axis_1" not in sweep_raw or "values_1" not in sweep_raw:
        raise ConfigError("sweep.axis_1", "a sweep needs sweep.axis_1 and sweep.values_1")

    def axis(n):
        name = sweep_raw[f"axis_{n}"]
        if name not in SimConfig.keys():
            raise ConfigKeyError(name)
        return name, [_number(name, v) for v in _split_list(sweep_raw.get(f"values_{n}", ""))]

    axis_2 = axis(2) if "axis_2" in sweep_raw else None
    scenarios = _split_list(sweep_raw.get("scenarios", "free, eh"))
    trials = n_trials if n_trials is not None else int(sweep_raw.get("n_trials", 1000))
    return SweepSpec(axis(1), axis_2, tuple(scenarios), trials, base)


# -- results ------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def as_sweep_result(result, scenario=None) -> SweepResult:
    if isinstance(result, SweepResult):
        return result
    if isinstance(result, ScenarioResult):
        label = Scenario.parse(scenario) if scenario is not None else Scenario.EH
        return SweepResult((), [SweepCell((), label, result)], {})
    if isinstance(result, Mapping):
        cells = [SweepCell((), Scenario.parse(s), r) for s, r in result.items()]
        return SweepResult((), cells, {})
    raise TypeError(f"cannot write {type(result).__name__}")


def csv_rows(result: SweepResult) -> list[list[str]]:
    header = [*result.axis_names, *CSV_RESULT_FIELDS]
    rows = [header]
    for c in result.cells:
        r = c.result
        rows.append([*(_fmt(v) for v in c.point), c.scenario.value, _fmt(r.mean_ee_total),
                     _fmt(r.std_ee_total), _fmt(r.ci95_half_width), _fmt(r.mean_rate_uplink),
                     _fmt(r.mean_rate_d2d), str(r.n_trials_effective)])
    return rows


def result_to_json(result: SweepResult, manifest: Optional["RunManifest"] = None) -> dict:
    return {
        "axis_names": list(result.axis_names),
        "cells": [{"point": list(c.point), "scenario": c.scenario.value,
                   "result": c.result.to_dict()} for c in result.cells],
        "metadata": result.metadata,
        "manifest": manifest.to_dict() if manifest is not None else None,
    }


def result_from_json(data: Mapping) -> SweepResult:
    cells = [SweepCell(tuple(c["point"]), Scenario.parse(c["scenario"]),
                       ScenarioResult.from_dict(c["result"])) for c in data["cells"]]
    return SweepResult(tuple(data["axis_names"]), cells, dict(data.get("metadata") or {}))


def write_results(result, fmt: str, path, manifest: Optional["RunManifest"] = None,
                  scenario=None) -> Path:
    """Write a sweep or scenario result as CSV or JSON; returns the path."""
    result = as_sweep_result(result, scenario)
    path = Path(path)
    try:
        if fmt == "csv":
            with path.open("w", newline="") as fh:
                csv.writer(fh, lineterminator="\n").writerows(csv_rows(result))
        elif fmt == "json":
            path.write_text(json.dumps(result_to_json(result, manifest), indent=2) + "\n")
        else:
            raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write results: {exc.strerror}", str(path)) from exc
    return path


def read_results(path) -> SweepResult:
    path = Path(path)
    if path.suffix == ".json":
        return result_from_json(json.loads(path.read_text()))
    raise ValueError("only JSON results can be read back; CSV is for plotting")


def write_table(path, header: Sequence[str], rows: Sequence[Sequence], fmt: str = "csv") -> Path:
    """Generic writer for outputs that are not sweep cells (solved altitudes)."""
    path = Path(path)
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows([[_fmt(v) for v in row] for row in rows])
    else:
        path.write_text(json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n")
    return path


@dataclass
class RunManifest:
    """Everything needed to repeat a run: resolved config plus command arguments."""

    command: str
    config: dict
    params: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    config_hash: str = ""
    seed: int = 0
    version: str = __version__

    @classmethod
    def create(cls, command: str, config: SimConfig, params: Mapping, outputs=()) -> "RunManifest":
        return cls(command, config.to_dict(), dict(params), [str(o) for o in outputs],
                   config.config_hash(), config.seed)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping) -> "RunManifest":
        return cls(**data)

    def write(self, path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
        return path

    @classmethod
    def read(cls, path) -> "RunManifest":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(str(path), "manifest not found")
        return cls.from_dict(json.loads(path.read_text()))

    def sim_config(self) -> SimConfig:
        return SimConfig.from_dict(self.config)


def manifest_path(out_path) -> Path:
    out_path = Path(out_path)
    return out_path.with_name(out_path.name + ".manifest.json")


def default_output(command: str, fmt: str) -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / f"{command}.{fmt}"
