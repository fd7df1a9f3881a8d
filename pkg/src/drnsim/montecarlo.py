"""Seeded Monte Carlo over deployments, with streaming statistics."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Sequence

from .config import Scenario, SimConfig
from .energy import d2d_transmit_powers
from .errors import AllTrialsDegenerate, ConfigError
from .geometry import sample_deployment, trial_rng
from .metrics import LinkGains, TotalMetrics

Z95 = 1.96


@dataclass
class RunningStats:
    """Welford accumulator; ``merge`` combines two partial accumulators."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def push(self, x: float) -> None:
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)

    def extend(self, values: Iterable[float]) -> "RunningStats":
        for v in values:
            self.push(v)
        return self

    def merge(self, other: "RunningStats") -> "RunningStats":
        n = self.count + other.count
        if n == 0:
            return RunningStats()
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / n
        return RunningStats(n, mean, m2)

    @property
    def variance(self) -> float:
        """Unbiased sample variance; 0 for fewer than two samples."""
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def std(self) -> float:
        return math.sqrt(max(self.variance, 0.0))


@dataclass(frozen=True)
class TrialPlan:
    config: SimConfig
    scenario: Scenario = Scenario.EH
    n_trials: int = 1000
    base_seed: Optional[int] = None  # defaults to config.seed

    def __post_init__(self):
        object.__setattr__(self, "scenario", Scenario.parse(self.scenario))
        if not isinstance(self.n_trials, int) or self.n_trials < 1:
            raise ConfigError("n_trials", f"must be a positive integer, got {self.n_trials!r}")
        if self.base_seed is None:
            object.__setattr__(self, "base_seed", self.config.seed)


@dataclass(frozen=True)
class ScenarioResult:
    mean_ee_total: float
    std_ee_total: float
    ci95_half_width: float
    mean_rate_uplink: float
    mean_rate_d2d: float
    std_rate_uplink: float
    std_rate_d2d: float
    n_trials_effective: int
    n_trials: int

    @property
    def n_degenerate(self) -> int:
        return self.n_trials - self.n_trials_effective

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data) -> "ScenarioResult":
        return cls(**data)

    @classmethod
    def from_trials(cls, trials: Sequence[Optional[TotalMetrics]]) -> "ScenarioResult":
        """Aggregate in trial order; ``None`` marks a trial with undefined EE."""
        ee, up, d2d = RunningStats(), RunningStats(), RunningStats()
        for t in trials:
            if t is None:
                continue
            ee.push(t.ee_total)
            if t.n_uplink:
                up.push(t.mean_rate_uplink)
            if t.n_d2d:
                d2d.push(t.mean_rate_d2d)
        if ee.count == 0:
            raise AllTrialsDegenerate(f"all {len(trials)} trials had no cellular user")
        nan = float("nan")
        return cls(
            mean_ee_total=ee.mean,
            std_ee_total=ee.std,
            ci95_half_width=Z95 * ee.std / math.sqrt(ee.count),
            mean_rate_uplink=up.mean if up.count else nan,
            mean_rate_d2d=d2d.mean if d2d.count else nan,
            std_rate_uplink=up.std,
            std_rate_d2d=d2d.std,
            n_trials_effective=ee.count,
            n_trials=len(trials),
        )


def run_trial(config: SimConfig, scenarios: Sequence[Scenario], trial: int,
              base_seed: Optional[int] = None) -> dict:
    """Score one deployment under each scenario (common random numbers)."""
    seed = config.seed if base_seed is None else base_seed
    dep = sample_deployment(config, rng=trial_rng(seed, trial))
    if dep.n_cellular == 0:
        return {s: None for s in scenarios}
    gains = LinkGains(config, dep)
    out = {}
    for s in scenarios:
        _, total = gains.evaluate(d2d_transmit_powers(config, dep, s))
        out[s] = total
    return out


def run_scenarios(config: SimConfig, scenarios: Sequence, n_trials: int,
                  base_seed: Optional[int] = None, n_jobs: int = 1) -> dict:
    """Run every scenario on the same ``n_trials`` deployments.

    Trials are independent streams keyed by (base_seed, trial index) and are
    aggregated in index order, so the statistics do not depend on ``n_jobs``.
    """
    scenarios = [Scenario.parse(s) for s in scenarios]
    plan = TrialPlan(config, scenarios[0], n_trials, base_seed)

    def one(trial):
        return run_trial(config, scenarios, trial, plan.base_seed)

    if n_jobs == 1:
        per_trial = [one(t) for t in range(n_trials)]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            per_trial = list(pool.map(one, range(n_trials)))
    return {s: ScenarioResult.from_trials([t[s] for t in per_trial]) for s in scenarios}


def run_scenario(plan: TrialPlan, n_jobs: int = 1) -> ScenarioResult:
    return run_scenarios(plan.config, [plan.scenario], plan.n_trials, plan.base_seed,
                         n_jobs)[plan.scenario]
