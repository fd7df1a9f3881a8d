"""Interference, SINR, rate and energy efficiency for one deployment.

Only co-band transmitters interfere, and only those within
``config.interference_radius`` of the victim (horizontal distance for the
UAV). Cellular uplinks are orthogonal, so no cellular-on-cellular term exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .channel import (G2aChannelParams, G2gChannelParams, g2a_interference_power,
                      g2a_received_power, g2g_received_power, path_gain_sq)
from .config import Scenario, SimConfig
from .energy import d2d_transmit_powers
from .errors import BandUndefinedEE, DegenerateGeometry, UndefinedEE
from .geometry import (Deployment, distance_to_uav, elevation_angle,
                       horizontal_distance_to_uav, pairwise_distances)


# -- single-victim operations -------------------------------------------------

def _check_band(band_of, index, band):
    if band is not None and int(band_of[index]) != int(band):
        raise ValueError(f"user {index} is on band {int(band_of[index])}, not {band}")
    return int(band_of[index])


def d2d_interference_at_d2d(deployment: Deployment, pair_index: int, band: Optional[int],
                            d2d_powers, config: SimConfig) -> float:
    """Aggregate co-band D2D interference at the receiver of ``pair_index``."""
    q = _check_band(deployment.d2d_band, pair_index, band)
    rx = deployment.rx_xy[pair_index]
    g2g = G2gChannelParams.from_config(config)
    total = 0.0
    for i in deployment.d2d_on(q):
        if i == pair_index:
            continue
        d = float(np.hypot(*(deployment.tx_xy[i] - rx)))
        if d > config.interference_radius:
            continue
        f = deployment.link_fading("d2d", int(i), pair_index)
        total += g2g_received_power(d2d_powers[i], f, d, g2g)
    return total


def cellular_interference_at_d2d(deployment: Deployment, pair_index: int,
                                 band: Optional[int], config: SimConfig) -> float:
    """Aggregate co-band cellular interference at the receiver of ``pair_index``."""
    q = _check_band(deployment.d2d_band, pair_index, band)
    rx = deployment.rx_xy[pair_index]
    g2g = G2gChannelParams.from_config(config)
    total = 0.0
    for j in deployment.cellular_on(q):
        d = float(np.hypot(*(deployment.cell_xy[j] - rx)))
        if d > config.interference_radius:
            continue
        f = deployment.link_fading("cell", int(j), pair_index)
        total += g2g_received_power(config.p_tx_cellular, f, d, g2g)
    return total


def d2d_interference_at_uav(deployment: Deployment, band: int, d2d_powers,
                            config: SimConfig) -> float:
    g2a = G2aChannelParams.from_config(config)
    pairs = deployment.d2d_on(band)
    uav = deployment.uav_position
    keep = horizontal_distance_to_uav(uav, deployment.tx_xy[pairs]) <= config.interference_radius
    pairs = pairs[keep]
    if pairs.size == 0:
        return 0.0
    d = distance_to_uav(uav, deployment.tx_xy[pairs])
    p = np.asarray(d2d_powers, dtype=float)[pairs]
    return float(np.sum(g2a_interference_power(p, deployment.fading.to_uav[pairs], d, g2a)))


def uplink_signal_power(deployment: Deployment, user_index: int, config: SimConfig) -> float:
    xy = deployment.cell_xy[user_index]
    d = distance_to_uav(deployment.uav_position, xy)
    theta = elevation_angle(deployment.uav_position, xy)
    return g2a_received_power(config.p_tx_cellular, d, theta, G2aChannelParams.from_config(config))


def uplink_sinr(deployment: Deployment, user_index: int, band: Optional[int], d2d_powers,
                config: SimConfig) -> float:
    q = _check_band(deployment.cell_band, user_index, band)
    signal = uplink_signal_power(deployment, user_index, config)
    return signal / (d2d_interference_at_uav(deployment, q, d2d_powers, config) + config.noise_a)


def d2d_signal_power(deployment: Deployment, pair_index: int, d2d_powers,
                     config: SimConfig) -> float:
    return g2g_received_power(d2d_powers[pair_index], deployment.fading.direct[pair_index],
                              config.l_d2d, G2gChannelParams.from_config(config))


def d2d_sinr(deployment: Deployment, pair_index: int, band: Optional[int], d2d_powers,
             config: SimConfig) -> float:
    q = _check_band(deployment.d2d_band, pair_index, band)
    signal = d2d_signal_power(deployment, pair_index, d2d_powers, config)
    denom = (d2d_interference_at_d2d(deployment, pair_index, q, d2d_powers, config)
             + cellular_interference_at_d2d(deployment, pair_index, q, config)
             + config.noise_g)
    return signal / denom


def rate(sinr, bandwidth_hz):
    """Shannon rate in bit/s."""
    out = bandwidth_hz * np.log2(1.0 + np.asarray(sinr, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def ee_denominator(cellular_powers, config: SimConfig) -> float:
    """Cellular transmit energy charged to a band: (T_a + T_c) * sum of powers."""
    return (config.t_uplink + config.t_eh) * float(np.sum(cellular_powers))


def band_ee(uplink_rates, d2d_rates, cellular_powers, config: SimConfig) -> float:
    """Bits delivered on a band per joule of cellular transmit energy."""
    if len(cellular_powers) == 0:
        raise BandUndefinedEE("no cellular user on this band")
    num = float(np.sum(d2d_rates)) + float(np.sum(uplink_rates))
    return num / ee_denominator(cellular_powers, config)


# -- whole-deployment evaluation ---------------------------------------------

@dataclass(frozen=True)
class UplinkRecords:
    index: np.ndarray
    signal: np.ndarray
    interference_from_d2d: float
    noise: float
    sinr: np.ndarray
    rate: np.ndarray


@dataclass(frozen=True)
class D2dRecords:
    index: np.ndarray
    power: np.ndarray
    signal: np.ndarray
    interference_from_d2d: np.ndarray
    interference_from_cellular: np.ndarray
    sinr: np.ndarray
    rate: np.ndarray


@dataclass(frozen=True)
class BandMetrics:
    band: int
    uplink: UplinkRecords
    d2d: D2dRecords
    numerator: float  # bit/s
    denominator: float  # joules
    ee: Optional[float]  # None when no cellular user is on the band


@dataclass(frozen=True)
class TotalMetrics:
    ee_total: float
    sum_rate_uplink: float
    sum_rate_d2d: float
    n_uplink: int
    n_d2d: int

    @property
    def mean_rate_uplink(self) -> float:
        return self.sum_rate_uplink / self.n_uplink if self.n_uplink else float("nan")

    @property
    def mean_rate_d2d(self) -> float:
        return self.sum_rate_d2d / self.n_d2d if self.n_d2d else float("nan")


def total_ee(bands: Sequence[BandMetrics], config: Optional[SimConfig] = None) -> TotalMetrics:
    """Network EE: summed numerators over summed denominators across bands."""
    num = sum(b.numerator for b in bands)
    den = sum(b.denominator for b in bands)
    if den <= 0:
        raise UndefinedEE("no cellular user transmits on any band")
    return TotalMetrics(
        ee_total=num / den,
        sum_rate_uplink=float(sum(np.sum(b.uplink.rate) for b in bands)),
        sum_rate_d2d=float(sum(np.sum(b.d2d.rate) for b in bands)),
        n_uplink=int(sum(b.uplink.index.size for b in bands)),
        n_d2d=int(sum(b.d2d.index.size for b in bands)),
    )


def _check_separation(dist_sq):
    if dist_sq.size and dist_sq.min() <= 0.0:
        raise DegenerateGeometry("co-located transmitter and receiver")


class LinkGains:
    """Power-independent path gains of one deployment, cached per band.

    Everything that does not depend on D2D transmit power is computed once,
    so several scenarios can be scored on the same deployment by a
    matrix-vector product each.
    """

    def __init__(self, config: SimConfig, deployment: Deployment):
        self.config = config
        self.deployment = deployment
        g2a = G2aChannelParams.from_config(config)
        dep, uav = deployment, deployment.uav_position
        r2 = config.interference_radius ** 2
        alpha_g = config.alpha_g
        self.bands = []
        for q in range(dep.q_bands):
            cells, pairs = dep.cellular_on(q), dep.d2d_on(q)
            d_up = distance_to_uav(uav, dep.cell_xy[cells])
            theta = elevation_angle(uav, dep.cell_xy[cells])
            up_signal = np.asarray(g2a_received_power(config.p_tx_cellular, d_up, theta, g2a),
                                   dtype=float).reshape(-1)

            tx, rx = dep.tx_xy[pairs], dep.rx_xy[pairs]
            d_uav = distance_to_uav(uav, tx)
            uav_gain = np.asarray(g2a_interference_power(1.0, dep.fading.to_uav[pairs], d_uav, g2a),
                                  dtype=float).reshape(-1)
            uav_gain[horizontal_distance_to_uav(uav, tx) ** 2 > r2] = 0.0

            dd2 = pairwise_distances(tx, rx, squared=True)
            np.fill_diagonal(dd2, config.l_d2d ** 2)  # own link, zeroed below
            _check_separation(dd2)
            far = dd2 > r2
            dd_gain = path_gain_sq(dd2, alpha_g)
            dd_gain *= dep.fading.d2d[q]
            np.copyto(dd_gain, 0.0, where=far)
            np.fill_diagonal(dd_gain, 0.0)

            cd2 = pairwise_distances(dep.cell_xy[cells], rx, squared=True)
            _check_separation(cd2)
            far = cd2 > r2
            cd_pow = path_gain_sq(cd2, alpha_g)
            cd_pow *= dep.fading.cell[q]
            np.copyto(cd_pow, 0.0, where=far)
            cd_pow *= config.p_tx_cellular

            direct_gain = dep.fading.direct[pairs] * path_gain_sq(config.l_d2d ** 2, alpha_g)
            self.bands.append(dict(cells=cells, pairs=pairs, up_signal=up_signal,
                                   uav_gain=uav_gain, dd_gain=dd_gain,
                                   cell_interf=cd_pow.sum(axis=0), direct_gain=direct_gain))

    def band_metrics(self, q: int, d2d_powers: np.ndarray) -> BandMetrics:
        cfg, b = self.config, self.bands[q]
        p = np.asarray(d2d_powers, dtype=float)[b["pairs"]]

        i_uav = float(p @ b["uav_gain"])
        up_sinr = b["up_signal"] / (i_uav + cfg.noise_a)
        up_rate = cfg.bandwidth_hz * np.log2(1.0 + up_sinr)

        d_signal = p * b["direct_gain"]
        i_dd = p @ b["dd_gain"]
        i_cd = b["cell_interf"]
        d_sinr = d_signal / (i_dd + i_cd + cfg.noise_g)
        d_rate = cfg.bandwidth_hz * np.log2(1.0 + d_sinr)

        num = float(np.sum(d_rate)) + float(np.sum(up_rate))
        den = ee_denominator(np.full(b["cells"].size, cfg.p_tx_cellular), cfg)
        return BandMetrics(
            band=q,
            uplink=UplinkRecords(b["cells"], b["up_signal"], i_uav, cfg.noise_a, up_sinr, up_rate),
            d2d=D2dRecords(b["pairs"], p, d_signal, i_dd, i_cd, d_sinr, d_rate),
            numerator=num,
            denominator=den,
            ee=num / den if den > 0 else None,
        )

    def evaluate(self, d2d_powers: np.ndarray) -> tuple[list[BandMetrics], TotalMetrics]:
        bands = [self.band_metrics(q, d2d_powers) for q in range(self.deployment.q_bands)]
        return bands, total_ee(bands, self.config)


def evaluate(config: SimConfig, deployment: Deployment, scenario,
             gains: Optional[LinkGains] = None) -> tuple[list[BandMetrics], TotalMetrics]:
    """Per-band metrics and network totals of one deployment under a scenario.

    Raises ``UndefinedEE`` when the deployment has no cellular user.
    """
    if deployment.n_cellular == 0:
        raise UndefinedEE("no cellular user transmits on any band")
    powers = d2d_transmit_powers(config, deployment, Scenario.parse(scenario))
    gains = gains or LinkGains(config, deployment)
    return gains.evaluate(powers)
