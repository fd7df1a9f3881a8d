import numpy as np
import pytest

from drnsim.config import SimConfig
from drnsim.geometry import Deployment, Fading


def build_deployment(cell_xy, cell_band, tx_xy, rx_xy, d2d_band, q_bands=5, altitude=700.0,
                     fading_seed=7, fading_value=None):
    """Hand-placed deployment with seeded (or constant) fading."""
    cell_xy = np.asarray(cell_xy, dtype=float).reshape(-1, 2)
    tx_xy = np.asarray(tx_xy, dtype=float).reshape(-1, 2)
    rx_xy = np.asarray(rx_xy, dtype=float).reshape(-1, 2)
    cell_band = np.asarray(cell_band, dtype=np.int64)
    d2d_band = np.asarray(d2d_band, dtype=np.int64)
    rng = np.random.default_rng(fading_seed)

    def draw(shape):
        if fading_value is not None:
            return np.full(shape, float(fading_value))
        return rng.exponential(1.0, shape)

    n_d = len(tx_xy)
    harvest, direct, to_uav = draw(n_d), draw(n_d), draw(n_d)
    d2d, cell = [], []
    for q in range(q_bands):
        nd = int(np.sum(d2d_band == q))
        nc = int(np.sum(cell_band == q))
        d2d.append(draw((nd, nd)))
        cell.append(draw((nc, nd)))
    fading = Fading(harvest, direct, to_uav, tuple(d2d), tuple(cell))
    return Deployment(cell_xy, cell_band, tx_xy, rx_xy, d2d_band,
                      np.array([0.0, 0.0, altitude]), fading, q_bands)


def frozen_five(l_d2d=10.0):
    """5 cellular users and 5 D2D pairs spread over bands 0, 1, 2 and 4."""
    cell_xy = [(120.0, -40.0), (35.0, 60.0), (-300.0, 210.0), (15.0, -8.0), (-50.0, -420.0)]
    cell_band = [0, 0, 1, 2, 4]
    tx_xy = [(100.0, -30.0), (60.0, 45.0), (-280.0, 230.0), (20.0, 0.0), (400.0, 400.0)]
    bearings = np.radians([10.0, 135.0, 250.0, 300.0, 45.0])
    tx = np.asarray(tx_xy)
    rx_xy = tx + l_d2d * np.column_stack((np.cos(bearings), np.sin(bearings)))
    d2d_band = [0, 0, 1, 0, 3]
    return build_deployment(cell_xy, cell_band, tx_xy, rx_xy, d2d_band)


@pytest.fixture
def table_config():
    return SimConfig()


@pytest.fixture
def frozen():
    return frozen_five()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
