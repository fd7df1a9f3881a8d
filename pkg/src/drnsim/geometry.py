"""PPP deployments on a disk under the UAV, and the geometry built on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .config import SimConfig
from .errors import NoEnergySource


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial.

    ``SeedSequence`` hashes the (seed, trial) pair into a fresh state, so a
    trial's draws depend only on those two integers, never on execution
    order or on how many other trials run alongside it.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial)]))


def uniform_disk(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


@dataclass(frozen=True, eq=False)
class Fading:
    """Unit-mean exponential power gains of every link the metrics use.

    Per-user vectors are indexed by global pair index. Link matrices are
    stored per band and indexed by position within ``members`` of that band,
    because only co-band links ever enter an interference sum.
    """

    harvest: np.ndarray  # nearest cellular -> D2D TX, f^{a,b}
    direct: np.ndarray  # D2D TX -> own RX, f^{b}
    to_uav: np.ndarray  # D2D TX -> UAV, f^{i,u}
    d2d: tuple  # per band: [tx_local, rx_local] D2D TX i -> D2D RX b
    cell: tuple  # per band: [cell_local, rx_local] cellular j -> D2D RX b


@dataclass(frozen=True, eq=False)
class Deployment:
    cell_xy: np.ndarray
    cell_band: np.ndarray
    tx_xy: np.ndarray
    rx_xy: np.ndarray
    d2d_band: np.ndarray
    uav_position: np.ndarray
    fading: Fading
    q_bands: int

    @property
    def n_cellular(self) -> int:
        return len(self.cell_xy)

    @property
    def n_d2d(self) -> int:
        return len(self.tx_xy)

    def cellular_on(self, band: int) -> np.ndarray:
        return np.flatnonzero(self.cell_band == band)

    def d2d_on(self, band: int) -> np.ndarray:
        return np.flatnonzero(self.d2d_band == band)

    def link_fading(self, kind: str, src: int, dst: int) -> float:
        """Fading draw of one directed link, addressed by global indices.

        ``kind`` is one of ``"harvest"`` (dst is the D2D pair, src ignored),
        ``"direct"``, ``"to_uav"`` (src is the D2D pair), ``"d2d"`` (TX of
        pair src to RX of pair dst) or ``"cell"`` (cellular src to RX of
        pair dst). Cross-band links raise ``KeyError``.
        """
        if kind == "harvest":
            return float(self.fading.harvest[dst])
        if kind in ("direct", "to_uav"):
            return float(getattr(self.fading, kind)[src])
        q = int(self.d2d_band[dst])
        rx_local = _local_index(self.d2d_on(q), dst)
        if kind == "d2d":
            if self.d2d_band[src] != q:
                raise KeyError(f"pairs {src} and {dst} are on different bands")
            return float(self.fading.d2d[q][_local_index(self.d2d_on(q), src), rx_local])
        if kind == "cell":
            if self.cell_band[src] != q:
                raise KeyError(f"cellular {src} and pair {dst} are on different bands")
            return float(self.fading.cell[q][_local_index(self.cellular_on(q), src), rx_local])
        raise KeyError(kind)

    def __eq__(self, other):
        if not isinstance(other, Deployment):
            return NotImplemented
        mine, theirs = _flat_arrays(self), _flat_arrays(other)
        return len(mine) == len(theirs) and all(
            a.shape == b.shape and a.dtype == b.dtype and np.array_equal(a, b)
            for a, b in zip(mine, theirs)
        )

    __hash__ = None


def _local_index(members: np.ndarray, idx: int) -> int:
    pos = int(np.searchsorted(members, idx))
    if pos >= len(members) or members[pos] != idx:
        raise KeyError(idx)
    return pos


def _flat_arrays(dep: Deployment) -> list:
    f = dep.fading
    return [dep.cell_xy, dep.cell_band, dep.tx_xy, dep.rx_xy, dep.d2d_band,
            dep.uav_position, f.harvest, f.direct, f.to_uav, *f.d2d, *f.cell]


def sample_deployment(config: SimConfig, trial: int = 0,
                      rng: Optional[np.random.Generator] = None) -> Deployment:
    """Draw one realization of both point processes and all link fading.

    The stream is ``trial_rng(config.seed, trial)`` unless ``rng`` is given.
    """
    if rng is None:
        rng = trial_rng(config.seed, trial)
    radius = config.region_radius
    n_c = int(rng.poisson(config.lambda_c * config.area))
    n_d = int(rng.poisson(config.lambda_d2d * config.area))

    cell_xy = uniform_disk(rng, n_c, radius)
    tx_xy = uniform_disk(rng, n_d, radius)
    rx_xy = _place_receivers(rng, tx_xy, config.l_d2d, radius)
    cell_band = rng.integers(0, config.q_bands, size=n_c)
    d2d_band = rng.integers(0, config.q_bands, size=n_d)

    harvest = rng.standard_exponential(n_d)
    direct = rng.standard_exponential(n_d)
    to_uav = rng.standard_exponential(n_d)
    d2d_blocks, cell_blocks = [], []
    for q in range(config.q_bands):
        nd_q = int(np.count_nonzero(d2d_band == q))
        nc_q = int(np.count_nonzero(cell_band == q))
        d2d_blocks.append(rng.standard_exponential((nd_q, nd_q)))
        cell_blocks.append(rng.standard_exponential((nc_q, nd_q)))

    fading = Fading(harvest, direct, to_uav, tuple(d2d_blocks), tuple(cell_blocks))
    uav = np.array([0.0, 0.0, config.uav_altitude])
    return Deployment(cell_xy, cell_band, tx_xy, rx_xy, d2d_band, uav, fading, config.q_bands)


def _place_receivers(rng, tx_xy, distance, radius):
    """Put each RX at ``distance`` from its TX, redrawing the bearing of any RX
    that would fall outside the region."""
    n = len(tx_xy)
    theta = 2.0 * np.pi * rng.random(n)
    rx = tx_xy + distance * np.column_stack((np.cos(theta), np.sin(theta)))
    outside = np.flatnonzero(np.hypot(rx[:, 0], rx[:, 1]) > radius)
    while outside.size:
        theta = 2.0 * np.pi * rng.random(outside.size)
        rx[outside] = tx_xy[outside] + distance * np.column_stack((np.cos(theta), np.sin(theta)))
        still = np.hypot(rx[outside, 0], rx[outside, 1]) > radius
        outside = outside[still]
    return rx


def nearest_cellular_distances(deployment: Deployment,
                               l_min_override: Optional[float] = None) -> np.ndarray:
    """Distance from every D2D transmitter to its closest cellular user."""
    if l_min_override is not None:
        return np.full(deployment.n_d2d, float(l_min_override))
    if deployment.n_d2d == 0:
        return np.empty(0)
    if deployment.n_cellular == 0:
        raise NoEnergySource("no cellular user to harvest from and no l_min override")
    dist, _ = cKDTree(deployment.cell_xy).query(deployment.tx_xy, k=1)
    return np.asarray(dist, dtype=float)


def nearest_cellular_distance(deployment: Deployment, d2d_index: int,
                              l_min_override: Optional[float] = None) -> float:
    if l_min_override is not None:
        return float(l_min_override)
    if deployment.n_cellular == 0:
        raise NoEnergySource("no cellular user to harvest from and no l_min override")
    diff = deployment.cell_xy - deployment.tx_xy[d2d_index]
    return float(np.min(np.hypot(diff[:, 0], diff[:, 1])))


def distance_to_uav(uav_position, ground_xy) -> np.ndarray:
    """3-D distance from ground points (z = 0) to the UAV."""
    ground_xy = np.asarray(ground_xy, dtype=float)
    dx = ground_xy[..., 0] - uav_position[0]
    dy = ground_xy[..., 1] - uav_position[1]
    return np.sqrt(dx * dx + dy * dy + uav_position[2] ** 2)


def horizontal_distance_to_uav(uav_position, ground_xy) -> np.ndarray:
    ground_xy = np.asarray(ground_xy, dtype=float)
    return np.hypot(ground_xy[..., 0] - uav_position[0], ground_xy[..., 1] - uav_position[1])


def elevation_angle(uav_position, user_position):
    """Elevation of the UAV seen from a ground user, in degrees (0, 90]."""
    uav_position = np.asarray(uav_position, dtype=float)
    d = distance_to_uav(uav_position, user_position)
    ratio = np.minimum(uav_position[2] / d, 1.0)
    return np.degrees(np.arcsin(ratio))


def pairwise_distances(a_xy: np.ndarray, b_xy: np.ndarray, squared: bool = False) -> np.ndarray:
    """Matrix of 2-D distances, rows ``a``, columns ``b``."""
    return cdist(np.asarray(a_xy, dtype=float).reshape(-1, 2),
                 np.asarray(b_xy, dtype=float).reshape(-1, 2),
                 "sqeuclidean" if squared else "euclidean")
