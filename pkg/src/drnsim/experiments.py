"""Parameter sweeps, study presets and the altitude solver."""

from __future__ import annotations

import datetime as _dt
import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import __version__
from .channel import G2aChannelParams, g2a_interference_power, g2a_received_power
from .config import INT_KEYS, Scenario, SimConfig
from .energy import d2d_transmit_powers
from .errors import ConfigError, ConfigKeyError, NoBracket
from .geometry import (distance_to_uav, elevation_angle, horizontal_distance_to_uav,
                       sample_deployment, trial_rng)
from .metrics import LinkGains
from .montecarlo import RunningStats, ScenarioResult, run_scenarios


def _coerce(name: str, value):
    if name not in SimConfig.keys():
        raise ConfigKeyError(name)
    if value is None:
        return None
    return int(value) if name in INT_KEYS else float(value)


def _check_axis(name, values):
    if not values:
        raise ConfigError(name, "sweep axis has no values")
    vals = [_coerce(name, v) for v in values]
    diffs = np.diff(np.asarray(vals, dtype=float))
    if len(vals) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ConfigError(name, "sweep values must be strictly monotone")
    return tuple(vals)


@dataclass(frozen=True)
class SweepSpec:
    axis_1: tuple  # (parameter name, values)
    axis_2: Optional[tuple] = None
    scenarios: tuple = (Scenario.FREE, Scenario.EH)
    n_trials: int = 1000
    base_config: SimConfig = field(default_factory=SimConfig)

    def __post_init__(self):
        name, values = self.axis_1
        object.__setattr__(self, "axis_1", (name, _check_axis(name, values)))
        if self.axis_2 is not None:
            name2, values2 = self.axis_2
            if name2 == name:
                raise ConfigError(name2, "both sweep axes name the same parameter")
            object.__setattr__(self, "axis_2", (name2, _check_axis(name2, values2)))
        object.__setattr__(self, "scenarios", tuple(Scenario.parse(s) for s in self.scenarios))
        if not self.scenarios:
            raise ConfigError("scenarios", "at least one scenario is required")
        if not isinstance(self.n_trials, int) or self.n_trials < 1:
            raise ConfigError("n_trials", "must be a positive integer")

    @property
    def axis_names(self) -> tuple:
        return (self.axis_1[0],) if self.axis_2 is None else (self.axis_1[0], self.axis_2[0])

    def grid(self):
        """Axis-value tuples in row-major order (axis 1 outer)."""
        if self.axis_2 is None:
            return [(v,) for v in self.axis_1[1]]
        return list(itertools.product(self.axis_1[1], self.axis_2[1]))

    def config_at(self, point) -> SimConfig:
        return self.base_config.replace(**dict(zip(self.axis_names, point)))


@dataclass(frozen=True)
class SweepCell:
    point: tuple
    scenario: Scenario
    result: ScenarioResult


@dataclass
class SweepResult:
    axis_names: tuple
    cells: list
    metadata: dict

    def get(self, point, scenario) -> ScenarioResult:
        point = tuple(point) if isinstance(point, (tuple, list)) else (point,)
        scenario = Scenario.parse(scenario)
        for c in self.cells:
            if c.scenario is scenario and np.allclose(c.point, point, rtol=1e-12, atol=0):
                return c.result
        raise KeyError((point, scenario))

    def curve(self, scenario, attr: str = "mean_ee_total", **fixed) -> tuple[list, list]:
        """Values of ``attr`` along axis 1 for one scenario.

        With two axes, pass the axis-2 value as a keyword, e.g.
        ``curve("eh", uav_altitude=500)``.
        """
        scenario = Scenario.parse(scenario)
        xs, ys = [], []
        for c in self.cells:
            if c.scenario is not scenario:
                continue
            if any(c.point[self.axis_names.index(k)] != v for k, v in fixed.items()):
                continue
            xs.append(c.point[0])
            ys.append(getattr(c.result, attr))
        return xs, ys


def sweep(spec: SweepSpec, n_jobs: int = 1, timestamp: Optional[str] = None) -> SweepResult:
    """Full-factorial evaluation; every cell reuses the base seed's trial streams."""
    cells = []
    for point in spec.grid():
        results = run_scenarios(spec.config_at(point), spec.scenarios, spec.n_trials,
                                spec.base_config.seed, n_jobs)
        cells.extend(SweepCell(point, s, results[s]) for s in spec.scenarios)
    meta = {
        "config_hash": spec.base_config.config_hash(),
        "seed": spec.base_config.seed,
        "n_trials": spec.n_trials,
        "timestamp": timestamp or _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "version": __version__,
    }
    return SweepResult(spec.axis_names, cells, meta)


# -- altitude solver ----------------------------------------------------------

def bisect_decreasing(func: Callable[[float], float], threshold: float, lo: float, hi: float,
                      tol: float = 1.0, values: Optional[tuple] = None) -> float:
    """Largest ``x`` in ``[lo, hi]`` with ``func(x) >= threshold`` for a
    non-increasing ``func``, to within ``tol``.

    Returns the feasible end of the final bracket. ``values`` may carry
    ``(func(lo), func(hi))`` when the caller already has them.
    """
    if not hi > lo:
        raise ValueError("need lo < hi")
    f_lo, f_hi = values if values is not None else (func(lo), func(hi))
    if not f_lo >= threshold:
        raise NoBracket(f_lo, f_hi, threshold)
    if f_hi >= threshold:
        if f_hi == threshold:
            return hi
        raise NoBracket(f_lo, f_hi, threshold)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if func(mid) >= threshold:
            lo = mid
        else:
            hi = mid
    return lo


class AltitudeObjective:
    """Mean network EE as a deterministic function of UAV altitude.

    Deployments are drawn once from fixed trial streams and reused at every
    altitude (common random numbers). The D2D side of each trial does not
    depend on the altitude, so its rates are computed once; each call only
    re-scores the uplinks.
    """

    def __init__(self, config: SimConfig, scenario, n_trials: int,
                 base_seed: Optional[int] = None):
        self.config = config
        self.scenario = Scenario.parse(scenario)
        self.n_trials = n_trials
        seed = config.seed if base_seed is None else base_seed
        self._trials = []
        self.calls = 0
        for t in range(n_trials):
            dep = sample_deployment(config, rng=trial_rng(seed, t))
            if dep.n_cellular == 0:
                self._trials.append(None)
                continue
            powers = d2d_transmit_powers(config, dep, self.scenario)
            bands, _ = LinkGains(config, dep).evaluate(powers)
            radius = config.interference_radius
            per_band = []
            for b in bands:
                tx = dep.tx_xy[b.d2d.index]
                inside = horizontal_distance_to_uav(dep.uav_position, tx) <= radius
                per_band.append((dep.cell_xy[b.uplink.index], tx[inside],
                                 powers[b.d2d.index][inside] * dep.fading.to_uav[b.d2d.index][inside]))
            self._trials.append(dict(
                d2d_rate=float(sum(np.sum(b.d2d.rate) for b in bands)),
                denominator=float(sum(b.denominator for b in bands)),
                bands=per_band,
            ))

    def trial_ee(self, trial: int, altitude: float) -> Optional[float]:
        rec = self._trials[trial]
        if rec is None:
            return None
        cfg = self.config
        g2a = G2aChannelParams.from_config(cfg)
        uav = np.array([0.0, 0.0, float(altitude)])
        uplink = 0.0
        for cell_xy, tx_xy, faded_power in rec["bands"]:
            if len(cell_xy) == 0:
                continue
            interference = float(np.sum(g2a_interference_power(
                faded_power, 1.0, distance_to_uav(uav, tx_xy), g2a))) if len(tx_xy) else 0.0
            signal = g2a_received_power(cfg.p_tx_cellular, distance_to_uav(uav, cell_xy),
                                        elevation_angle(uav, cell_xy), g2a)
            uplink += float(np.sum(cfg.bandwidth_hz * np.log2(1.0 + signal / (interference + cfg.noise_a))))
        return (rec["d2d_rate"] + uplink) / rec["denominator"]

    def __call__(self, altitude: float) -> float:
        self.calls += 1
        stats = RunningStats()
        for t in range(self.n_trials):
            ee = self.trial_ee(t, altitude)
            if ee is not None:
                stats.push(ee)
        if stats.count == 0:
            raise ValueError("no trial has a cellular user")
        return stats.mean


def solve_altitude(config: SimConfig, scenario, ee_threshold: float,
                   h_range: Sequence[float] = (50.0, 2000.0), tol: float = 1.0,
                   n_trials: int = 200, base_seed: Optional[int] = None) -> float:
    """Highest UAV altitude whose mean network EE still meets ``ee_threshold``.

    Raises ``NoBracket`` unless EE(h_low) >= threshold >= EE(h_high).
    """
    objective = AltitudeObjective(config, scenario, n_trials, base_seed)
    lo, hi = float(h_range[0]), float(h_range[1])
    return bisect_decreasing(objective, ee_threshold, lo, hi, tol)


# -- study presets -----------------------------------------------------------

D2D_DENSITY_GRID = tuple(k * 1e-4 for k in range(1, 11))
CELL_DENSITY_GRID = (3e-4, 5e-4, 7e-4, 1e-3)
ALTITUDE_PAIR = (500.0, 700.0)
SOLVER_D2D_DENSITIES = (2e-4, 5e-4, 8e-4)
T_EH_GRID = tuple(k * 0.01 for k in range(1, 11))
L_MIN_GRID = (10.0, 20.0, 40.0)
RATE_DENSITY_GRID = (1e-4, 3e-4, 6e-4, 1e-3)
BOTH = (Scenario.FREE, Scenario.EH)


def d2d_density_sweep(n_trials: int = 500, base: Optional[SimConfig] = None) -> SweepSpec:
    """Network EE against D2D density."""
    return SweepSpec(("lambda_d2d", D2D_DENSITY_GRID), None, BOTH, n_trials,
                     base or SimConfig())


def cell_density_altitude_sweep(n_trials: int = 500, base: Optional[SimConfig] = None) -> SweepSpec:
    """Network EE against cellular density, at two UAV altitudes."""
    return SweepSpec(("lambda_c", CELL_DENSITY_GRID), ("uav_altitude", ALTITUDE_PAIR),
                     BOTH, n_trials, base or SimConfig())


def eh_time_sweep(n_trials: int = 500, base: Optional[SimConfig] = None) -> SweepSpec:
    """Network EE against the energy-transfer time, for several nearest-user distances."""
    return SweepSpec(("t_eh", T_EH_GRID), ("l_min_override", L_MIN_GRID), BOTH, n_trials,
                     base or SimConfig())


def rate_vs_d2d_density_sweep(n_trials: int = 500, base: Optional[SimConfig] = None) -> SweepSpec:
    """Per-user rates against D2D density."""
    return SweepSpec(("lambda_d2d", RATE_DENSITY_GRID), None, BOTH, n_trials, base or SimConfig())


def rate_vs_cell_density_sweep(n_trials: int = 500, base: Optional[SimConfig] = None) -> SweepSpec:
    """Per-user rates against cellular density.

    The harvesting distance is measured to the actual nearest cellular user
    here, since a fixed distance would decouple harvested power from density.
    """
    base = (base or SimConfig()).replace(l_min_override=None)
    return SweepSpec(("lambda_c", RATE_DENSITY_GRID), None, BOTH, n_trials, base)


def altitude_curve(config: SimConfig, scenario, densities: Sequence[float], ee_threshold: float,
                   h_range: Sequence[float] = (50.0, 2000.0), tol: float = 1.0,
                   n_trials: int = 200) -> list:
    """Solved altitude for each D2D density."""
    return [solve_altitude(config.replace(lambda_d2d=d), scenario, ee_threshold, h_range, tol,
                           n_trials) for d in densities]


def headline_ratio(results: Sequence[SweepResult]) -> tuple[float, dict]:
    """Largest EE(EH) / EE(Free) over the cells of the given sweeps."""
    best, where = -np.inf, {}
    for res in results:
        for c in res.cells:
            if c.scenario is not Scenario.EH:
                continue
            free = res.get(c.point, Scenario.FREE)
            ratio = c.result.mean_ee_total / free.mean_ee_total
            if ratio > best:
                best, where = ratio, dict(zip(res.axis_names, c.point))
    return float(best), where
