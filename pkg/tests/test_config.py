"""Config parsing, validation, and canonical hashing."""

import pytest

from risk_sieve.config import (
    ConfigError,
    FilterConfig,
    canonical_text,
    config_hash,
    load_config,
    parse_config,
)


def test_defaults_match_documented_values():
    cfg = FilterConfig()
    assert cfg.sigma_car_max_m == 15.0
    assert cfg.sigma_ped_max_m == 1.5
    assert cfg.sigma_cyc_max_m == 3.3
    assert cfg.tau0_inv_per_s == 0.56
    assert cfg.s_max_s == 8.0
    assert cfg.dt_s == 0.25
    assert cfg.r_valuable == 1e-9
    assert cfg.v_min_mps == 0.5
    assert cfg.path_min_m == 5.0
    assert cfg.n_steps() == 32


def test_parse_overrides_and_comments():
    text = """
    # horizon tweaks
    s_max_s = 4.0
    dt_s=0.5   # coarser steps
    survival_mode = pair
    dedupe_second_order = true
    n_components = 3
    growth_long_mps = auto
    collision_area_m2 = 12.5
    """
    cfg = parse_config(text)
    assert cfg.s_max_s == 4.0
    assert cfg.dt_s == 0.5
    assert cfg.survival_mode == "pair"
    assert cfg.dedupe_second_order is True
    assert cfg.n_components == 3
    assert cfg.growth_long_mps is None
    assert cfg.collision_area_m2 == 12.5
    assert cfg.n_steps() == 8


def test_parse_reports_every_bad_line():
    text = "nope = 1\ns_max_s = fast\ns_max_s = 8\n"
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    message = str(err.value)
    assert "line 1" in message and "unknown key" in message
    assert "line 2" in message
    assert "line 3" in message and "duplicate key" in message


@pytest.mark.parametrize(
    "text",
    [
        "dt_s = 0",
        "survival_mode = sometimes",
        "second_order_pairing = star",
        "n_components = 0",
        "r_valuable = -1e-9",
        "s_max_s = 0.1\ndt_s = 0.25",
    ],
)
def test_invalid_values_rejected(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_canonical_text_round_trips_and_hash_is_stable():
    cfg = parse_config("s_max_s = 6.0\ntau0_inv_per_s = 0.3\n")
    again = parse_config(canonical_text(cfg))
    assert again == cfg
    assert config_hash(cfg) == config_hash(again)
    assert config_hash(cfg) != config_hash(FilterConfig())


def test_load_config_names_file_on_error(tmp_path):
    path = tmp_path / "filter.cfg"
    path.write_text("mystery = 1\n")
    with pytest.raises(ConfigError) as err:
        load_config(path)
    assert "filter.cfg" in str(err.value)


def test_load_config_reads_file(tmp_path):
    path = tmp_path / "filter.cfg"
    path.write_text("v_min_mps = 0.2\n")
    assert load_config(path).v_min_mps == 0.2
