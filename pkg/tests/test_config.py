import pytest

from drnsim.config import Scenario, SimConfig, db_to_linear, dbm_to_watts, harvest_cap
from drnsim.errors import ConfigError, ConfigKeyError


def test_defaults_validate():
    cfg = SimConfig()
    assert cfg.interference_radius == cfg.region_radius
    assert cfg.p_harvest_max == pytest.approx(0.9315, abs=1e-4)


@pytest.mark.parametrize("key, value", [
    ("delta_pseh", 1.5), ("delta_pseh", -0.1), ("lambda_c", 0.0), ("noise_a", -1.0),
    ("alpha_a", 1.9), ("eta_nlos", 0.0), ("q_bands", 0), ("interference_radius", 2000.0),
    ("l_d2d", 5000.0), ("t_eh", 0.0), ("seed", -1),
])
def test_invalid_values_name_the_key(key, value):
    with pytest.raises(ConfigError) as exc:
        SimConfig(**{key: value})
    assert exc.value.key == key
    assert key in str(exc.value)


def test_replace_rejects_unknown_key():
    with pytest.raises(ConfigKeyError) as exc:
        SimConfig().replace(altitude=3.0)
    assert "altitude" in str(exc.value)


def test_replace_keeps_untruncated_radius():
    cfg = SimConfig().replace(region_radius=500.0)
    assert cfg.interference_radius == 500.0
    cut = SimConfig(interference_radius=300.0).replace(region_radius=500.0)
    assert cut.interference_radius == 300.0


def test_dict_round_trip_and_hash():
    cfg = SimConfig(seed=3, l_min_override=None)
    assert SimConfig.from_dict(cfg.to_dict()) == cfg
    assert cfg.config_hash() == SimConfig.from_dict(cfg.to_dict()).config_hash()
    assert cfg.config_hash() != cfg.replace(seed=4).config_hash()


def test_unit_conversions():
    assert db_to_linear(20.0) == pytest.approx(100.0)
    assert dbm_to_watts(-120.0) == pytest.approx(1e-15)
    assert dbm_to_watts(30.0) == pytest.approx(1.0)


def test_harvest_cap_convex_is_unbounded():
    assert harvest_cap(0.1, 1.0, 0.0) == float("inf")


@pytest.mark.parametrize("text, expected", [("free", Scenario.FREE), ("Free-DRN", Scenario.FREE),
                                            ("EH", Scenario.EH), ("eh_enabled", Scenario.EH)])
def test_scenario_parse(text, expected):
    assert Scenario.parse(text) is expected


def test_scenario_parse_unknown():
    with pytest.raises(ConfigError):
        Scenario.parse("solar")
