"""Ground-to-ground and ground-to-air received power.

All functions broadcast over numpy arrays and return floats for scalar input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SimConfig
from .errors import ConfigError, DegenerateGeometry


@dataclass(frozen=True)
class G2aChannelParams:
    env_b: float = 0.136
    env_c: float = 11.95
    eta_nlos: float = 100.0
    alpha_a: float = 2.0

    def __post_init__(self):
        if not (self.env_b > 0 and self.env_c > 0):
            raise ConfigError("env_b/env_c", "environment constants must be positive")
        if not self.eta_nlos > 0:
            raise ConfigError("eta_nlos", "must be positive")
        if not self.alpha_a >= 2:
            raise ConfigError("alpha_a", "path-loss exponent must be >= 2")

    @classmethod
    def from_config(cls, config: SimConfig) -> "G2aChannelParams":
        return cls(config.env_b, config.env_c, config.eta_nlos, config.alpha_a)


@dataclass(frozen=True)
class G2gChannelParams:
    alpha_g: float = 4.0

    def __post_init__(self):
        if not self.alpha_g >= 2:
            raise ConfigError("alpha_g", "path-loss exponent must be >= 2")

    @classmethod
    def from_config(cls, config: SimConfig) -> "G2gChannelParams":
        return cls(config.alpha_g)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def path_gain_sq(dist_sq, alpha):
    """``d**-alpha`` evaluated from squared distances.

    Even integer exponents avoid the generic ``pow``, which dominates the
    cost of large interference matrices.
    """
    d2 = np.asarray(dist_sq, dtype=float)
    half = alpha / 2.0
    if half == int(half) and 1 <= half <= 4:
        inv = np.reciprocal(d2)
        if half == 1:
            return inv
        out = inv * inv
        for _ in range(int(half) - 2):
            out *= inv
        return out
    return d2 ** (-half)


def los_probability(theta_deg, params: G2aChannelParams):
    """Sigmoid LoS probability in the elevation angle.

    ``C`` appears both as the multiplier and as the angle offset:
    ``1 / (1 + C exp(-B (theta - C)))``.
    """
    theta = np.asarray(theta_deg, dtype=float)
    c = params.env_c
    return _out(1.0 / (1.0 + c * np.exp(-params.env_b * (theta - c))))


def nlos_probability(theta_deg, params: G2aChannelParams):
    return _out(1.0 - np.asarray(los_probability(theta_deg, params)))


def g2g_received_power(p_tx, fading, distance, params: G2gChannelParams):
    """Rayleigh-faded power-law link: ``p_tx * fading * d**-alpha_g``."""
    d = np.asarray(distance, dtype=float)
    if np.any(d <= 0):
        raise DegenerateGeometry("zero G2G distance between co-located users")
    return _out(np.asarray(p_tx, dtype=float) * np.asarray(fading, dtype=float)
                * d ** (-params.alpha_g))


def g2a_received_power(p_tx, distance_3d, theta_deg, params: G2aChannelParams,
                       p_los=None):
    """Uplink desired power at the UAV: ``(P_los + eta P_nlos) p D**-alpha_a``.

    No fast fading on this link. ``p_los`` overrides the sigmoid, which the
    tests use to pin the mixture.
    """
    d = np.asarray(distance_3d, dtype=float)
    if np.any(d <= 0):
        raise DegenerateGeometry("zero G2A distance")
    if p_los is None:
        p_los = los_probability(theta_deg, params)
    p_los = np.asarray(p_los, dtype=float)
    mix = p_los + params.eta_nlos * (1.0 - p_los)
    return _out(mix * np.asarray(p_tx, dtype=float) * d ** (-params.alpha_a))


def g2a_interference_power(p_tx, fading, distance_3d, params: G2aChannelParams):
    """D2D interference reaching the UAV: faded path loss, no LoS mixture."""
    d = np.asarray(distance_3d, dtype=float)
    if np.any(d <= 0):
        raise DegenerateGeometry("zero G2A distance")
    return _out(np.asarray(p_tx, dtype=float) * np.asarray(fading, dtype=float)
                * d ** (-params.alpha_a))
