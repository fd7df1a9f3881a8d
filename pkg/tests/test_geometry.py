import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import build_deployment
from drnsim.config import SimConfig
from drnsim.errors import NoEnergySource
from drnsim.geometry import (elevation_angle, nearest_cellular_distance, nearest_cellular_distances,
                             pairwise_distances, sample_deployment, trial_rng)


def test_counts_match_poisson_mean():
    cfg = SimConfig(lambda_d2d=1e-9)
    counts = np.array([sample_deployment(cfg, t).n_cellular for t in range(2000)])
    mu = 3e-4 * math.pi * 1e6
    assert abs(counts.mean() - mu) < 3 * math.sqrt(mu / counts.size)


def test_d2d_counts_match_poisson_mean():
    cfg = SimConfig(lambda_c=1e-9, lambda_d2d=5e-5, q_bands=50)
    counts = np.array([sample_deployment(cfg, t).n_d2d for t in range(1000)])
    mu = 5e-5 * math.pi * 1e6
    assert abs(counts.mean() - mu) < 3 * math.sqrt(mu / counts.size)


def test_vanishing_density_gives_empty_process():
    dep = sample_deployment(SimConfig(lambda_d2d=1e-12), 0)
    assert dep.n_d2d == 0
    assert dep.tx_xy.shape == (0, 2)


def test_positions_uniform_on_disk():
    cfg = SimConfig(lambda_d2d=1e-9, lambda_c=1e-3)
    xy = np.vstack([sample_deployment(cfg, t).cell_xy for t in range(20)])
    r = np.hypot(xy[:, 0], xy[:, 1])
    assert r.max() <= 1000.0
    # P(r <= R / sqrt 2) = 1/2 for a uniform disk
    frac = np.mean(r <= 1000.0 / math.sqrt(2))
    assert abs(frac - 0.5) < 4 * math.sqrt(0.25 / r.size)
    # angle uniform: each quadrant gets about a quarter
    quad = np.bincount((np.arctan2(xy[:, 1], xy[:, 0]) // (math.pi / 2)).astype(int) + 2, minlength=4)
    assert np.all(np.abs(quad / r.size - 0.25) < 4 * math.sqrt(0.1875 / r.size))


def test_receivers_at_link_distance_and_inside():
    cfg = SimConfig(lambda_d2d=1e-3, l_d2d=50.0)
    dep = sample_deployment(cfg, 3)
    sep = np.hypot(*(dep.rx_xy - dep.tx_xy).T)
    np.testing.assert_allclose(sep, 50.0, rtol=1e-12)
    assert np.all(np.hypot(*dep.rx_xy.T) <= 1000.0)


def test_bands_in_range_and_fading_shapes():
    dep = sample_deployment(SimConfig(), 1)
    assert set(np.unique(dep.cell_band)) <= set(range(5))
    for q in range(5):
        nd, nc = dep.d2d_on(q).size, dep.cellular_on(q).size
        assert dep.fading.d2d[q].shape == (nd, nd)
        assert dep.fading.cell[q].shape == (nc, nd)
    assert abs(dep.fading.harvest.mean() - 1.0) < 0.2


def test_same_seed_and_trial_are_identical():
    cfg = SimConfig(seed=11)
    assert sample_deployment(cfg, 4) == sample_deployment(cfg, 4)
    assert not sample_deployment(cfg, 4) == sample_deployment(cfg, 5)
    assert not sample_deployment(cfg, 4) == sample_deployment(cfg.replace(seed=12), 4)


def test_trial_streams_independent_of_order():
    a = trial_rng(3, 9).random(4)
    trial_rng(3, 8).random(100)
    assert np.array_equal(a, trial_rng(3, 9).random(4))


def test_link_fading_lookup():
    dep = build_deployment([(0, 50), (0, -50)], [0, 1], [(0, 0), (30, 0), (60, 0)],
                           [(10, 0), (40, 0), (70, 0)], [1, 0, 1])
    assert dep.link_fading("d2d", 2, 0) == dep.fading.d2d[1][1, 0]
    assert dep.link_fading("cell", 1, 2) == dep.fading.cell[1][0, 1]
    with pytest.raises(KeyError):
        dep.link_fading("d2d", 1, 0)


def test_nearest_override_wins():
    dep = build_deployment([(500, 500)], [0], [(0, 0)], [(10, 0)], [0])
    assert nearest_cellular_distance(dep, 0, 10.0) == 10.0
    assert nearest_cellular_distances(dep, 10.0).tolist() == [10.0]


def test_nearest_three_four_five():
    dep = build_deployment([(3, 4)], [0], [(0, 0)], [(10, 0)], [0])
    assert nearest_cellular_distance(dep, 0) == 5.0


def test_nearest_matches_brute_force():
    rng = np.random.default_rng(5)
    cells = rng.uniform(-500, 500, (20, 2))
    tx = rng.uniform(-500, 500, (15, 2))
    dep = build_deployment(cells, [0] * 20, tx, tx + [10, 0], [0] * 15)
    brute = [min(math.dist(c, t) for c in cells) for t in tx]
    np.testing.assert_allclose(nearest_cellular_distances(dep), brute, rtol=1e-12)
    assert [nearest_cellular_distance(dep, i) for i in range(15)] == pytest.approx(brute, rel=1e-12)


def test_nearest_without_cellular_users():
    dep = build_deployment([], [], [(0, 0)], [(10, 0)], [0])
    with pytest.raises(NoEnergySource):
        nearest_cellular_distances(dep)


def test_elevation_examples():
    uav = np.array([0.0, 0.0, 700.0])
    assert elevation_angle(uav, [0.0, 0.0]) == pytest.approx(90.0)
    assert elevation_angle(uav, [700.0, 0.0]) == pytest.approx(45.0, rel=1e-12)
    assert 0 < elevation_angle(uav, [1e9, 0.0]) < 1e-4


@settings(max_examples=200, deadline=None)
@given(st.floats(1.0, 2000.0), st.floats(0.0, 5000.0))
def test_elevation_in_range(h, offset):
    theta = float(elevation_angle(np.array([0.0, 0.0, h]), [offset, 0.0]))
    assert 0.0 < theta <= 90.0
    assert theta == pytest.approx(math.degrees(math.atan2(h, offset)), abs=1e-6)


def test_pairwise_distances():
    a = np.array([[0.0, 0.0], [3.0, 4.0]])
    np.testing.assert_allclose(pairwise_distances(a, a), [[0, 5], [5, 0]])
    np.testing.assert_allclose(pairwise_distances(a, a, squared=True), [[0, 25], [25, 0]])
