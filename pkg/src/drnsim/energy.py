"""Power-splitting nonlinear energy harvesting and D2D transmit power."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channel import G2gChannelParams, g2g_received_power
from .config import Scenario, SimConfig, harvest_cap
from .errors import ConfigError
from .geometry import Deployment, nearest_cellular_distance, nearest_cellular_distances


@dataclass(frozen=True)
class PsehModel:
    """Quadratic harvester ``a1 x^2 + a2 x + a3`` fed the ``1 - delta`` share."""

    a1: float = -0.116
    a2: float = 0.6574
    a3: float = -6.549e-7
    delta: float = 0.1
    p_harvest_max: float = field(init=False)

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ConfigError("delta_pseh", f"must lie in [0, 1], got {self.delta!r}")
        object.__setattr__(self, "p_harvest_max", harvest_cap(self.a1, self.a2, self.a3))

    @classmethod
    def from_config(cls, config: SimConfig) -> "PsehModel":
        return cls(config.eh_a1, config.eh_a2, config.eh_a3, config.delta_pseh)

    def raw(self, x):
        return self.a1 * x * x + self.a2 * x + self.a3


def harvested_power(incident, model: PsehModel):
    """Harvested DC power for an incident RF power, clamped to ``[0, cap]``.

    The decoding share ``delta * incident`` is dropped. For a concave
    harvester the cap is the vertex value, so past the vertex the output
    follows the falling branch of the quadratic rather than holding the peak.
    """
    x = (1.0 - model.delta) * np.asarray(incident, dtype=float)
    out = np.clip(model.raw(x), 0.0, model.p_harvest_max)
    return float(out) if np.ndim(out) == 0 else out


def harvested_energy(p_harvested, t_eh):
    return p_harvested * t_eh


def _eh_power(p_tx_cellular, fading, l_min, config: SimConfig):
    incident = g2g_received_power(p_tx_cellular, fading, l_min,
                                  G2gChannelParams.from_config(config))
    p = harvested_power(incident, PsehModel.from_config(config))
    return harvested_energy(p, config.t_eh) / config.t_d2d


def d2d_transmit_power(config: SimConfig, deployment: Deployment, d2d_index: int,
                       band: Optional[int] = None, scenario=Scenario.EH) -> float:
    """Transmit power of one D2D pair under the given scenario.

    ``band`` is accepted for symmetry with the per-band metrics; with a single
    power budget per pair it does not change the result.
    """
    scenario = Scenario.parse(scenario)
    if scenario is Scenario.FREE:
        return float(config.p_tx_d2d_fixed)
    l_min = nearest_cellular_distance(deployment, d2d_index, config.l_min_override)
    return float(_eh_power(config.p_tx_cellular, deployment.fading.harvest[d2d_index],
                           l_min, config))


def d2d_transmit_powers(config: SimConfig, deployment: Deployment, scenario) -> np.ndarray:
    """Vector of transmit powers for every D2D pair."""
    scenario = Scenario.parse(scenario)
    if scenario is Scenario.FREE:
        return np.full(deployment.n_d2d, float(config.p_tx_d2d_fixed))
    if deployment.n_d2d == 0:
        return np.empty(0)
    l_min = nearest_cellular_distances(deployment, config.l_min_override)
    return np.asarray(_eh_power(config.p_tx_cellular, deployment.fading.harvest, l_min, config),
                      dtype=float).reshape(-1)
