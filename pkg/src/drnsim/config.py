"""Model parameters and scenario labels."""

from __future__ import annotations

import dataclasses
import enum
import hashlib
import json
import math
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from .errors import ConfigError, ConfigKeyError


class Scenario(str, enum.Enum):
    """Source of D2D transmit power."""

    FREE = "free"  # fixed, battery-limited D2D power
    EH = "eh"  # power harvested from the nearest cellular user

    @classmethod
    def parse(cls, value) -> "Scenario":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {
            "free": cls.FREE,
            "free_drn": cls.FREE,
            "eh": cls.EH,
            "eh_enabled": cls.EH,
            "ehenabled": cls.EH,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ConfigError("scenario", f"unknown scenario {value!r}") from None


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class SimConfig:
    """Every scalar parameter of the network model, in linear SI units.

    Defaults give the common operating point of the density, altitude and
    time-split studies: 3e-4 users/m^2 of each kind, 10 m D2D links, 10 m to
    the nearest cellular user, 50 ms slots and a 700 m UAV. Fixed D2D power
    is 0.1 mW; ``eta_nlos`` is a linear factor on the NLoS share (100 = 20 dB).
    """

    lambda_c: float = 3e-4
    lambda_d2d: float = 3e-4
    l_d2d: float = 10.0
    l_min_override: Optional[float] = 10.0
    p_tx_cellular: float = 1.0
    p_tx_d2d_fixed: float = 1e-4
    uav_altitude: float = 700.0
    alpha_a: float = 2.0
    alpha_g: float = 4.0
    env_b: float = 0.136
    env_c: float = 11.95
    eta_nlos: float = 100.0
    q_bands: int = 5
    bandwidth_hz: float = 1e8
    noise_a: float = 1e-15
    noise_g: float = 1e-15
    eh_a1: float = -0.116
    eh_a2: float = 0.6574
    eh_a3: float = -6.549e-7
    delta_pseh: float = 0.1
    t_eh: float = 0.05
    t_d2d: float = 0.05
    t_uplink: float = 0.05
    region_radius: float = 1000.0
    interference_radius: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.interference_radius is None:
            object.__setattr__(self, "interference_radius", float(self.region_radius))
        self.validate()

    def validate(self) -> None:
        positive = (
            "lambda_c", "lambda_d2d", "l_d2d", "p_tx_cellular", "p_tx_d2d_fixed",
            "uav_altitude", "env_b", "env_c", "bandwidth_hz", "noise_a", "noise_g",
            "t_eh", "t_d2d", "t_uplink", "region_radius", "interference_radius",
        )
        for name in positive:
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(name, f"must be a finite positive number, got {value!r}")
        if self.l_min_override is not None and not self.l_min_override > 0:
            raise ConfigError("l_min_override", "must be positive when set")
        if not isinstance(self.q_bands, int) or self.q_bands < 1:
            raise ConfigError("q_bands", f"must be a positive integer, got {self.q_bands!r}")
        if not 0.0 <= self.delta_pseh <= 1.0:
            raise ConfigError("delta_pseh", f"must lie in [0, 1], got {self.delta_pseh!r}")
        if not (math.isfinite(self.eta_nlos) and self.eta_nlos > 0.0):
            raise ConfigError("eta_nlos", f"must be a finite positive factor, got {self.eta_nlos!r}")
        for name in ("alpha_a", "alpha_g"):
            if not getattr(self, name) >= 2.0:
                raise ConfigError(name, "path-loss exponent must be >= 2")
        if self.interference_radius > self.region_radius:
            raise ConfigError("interference_radius", "must not exceed region_radius")
        if self.l_d2d > self.region_radius:
            raise ConfigError("l_d2d", "must not exceed region_radius")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError("seed", "must be an unsigned 64-bit integer")

    @classmethod
    def keys(cls) -> tuple[str, ...]:
        return tuple(f.name for f in dataclasses.fields(cls))

    def replace(self, **changes: Any) -> "SimConfig":
        unknown = set(changes) - set(self.keys())
        if unknown:
            raise ConfigKeyError(sorted(unknown)[0])
        if "region_radius" in changes and "interference_radius" not in changes:
            # keep an untruncated default untruncated
            if self.interference_radius == self.region_radius:
                changes["interference_radius"] = None
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SimConfig":
        unknown = set(data) - set(cls.keys())
        if unknown:
            raise ConfigKeyError(sorted(unknown)[0])
        return cls(**data)

    def config_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, allow_nan=False)
        return hashlib.sha256(blob.encode()).hexdigest()

    @property
    def area(self) -> float:
        return math.pi * self.region_radius**2

    @property
    def p_harvest_max(self) -> float:
        return harvest_cap(self.eh_a1, self.eh_a2, self.eh_a3)


def harvest_cap(a1: float, a2: float, a3: float) -> float:
    """Saturation level of the quadratic harvester (its vertex value)."""
    if a1 < 0:
        return a3 - a2 * a2 / (4.0 * a1)
    return math.inf


# config-file spellings in dB/dBm, mapped to the linear fields they set
DB_KEYS = {"eta_nlos_db": ("eta_nlos",), "eta_db": ("eta_nlos",)}
DBM_KEYS = {
    "noise_dbm": ("noise_a", "noise_g"),
    "noise_a_dbm": ("noise_a",),
    "noise_g_dbm": ("noise_g",),
    "p_tx_cellular_dbm": ("p_tx_cellular",),
    "p_tx_d2d_fixed_dbm": ("p_tx_d2d_fixed",),
}
INT_KEYS = {"q_bands", "seed"}
OPTIONAL_KEYS = {"l_min_override", "interference_radius"}
