import json
import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swipt_relay.model import (
    ChannelRealization,
    ConfigError,
    NoiseProfile,
    SubcarrierPairing,
    config_errors,
    config_from_dict,
    config_to_dict,
    dbm_to_mw,
    default_config,
    load_config,
    validate_config,
)

from conftest import make_cfg


def test_dbm_to_mw_reference_points():
    assert dbm_to_mw(0.0) == 1.0
    assert dbm_to_mw(30.0) == 1000.0
    assert dbm_to_mw(1.0) == pytest.approx(1.2589254117941673, rel=1e-15)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_dbm_to_mw_rejects_nonfinite(bad):
    with pytest.raises(ValueError):
        dbm_to_mw(bad)


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_dbm_to_mw_is_log_domain_homomorphism(a, b):
    assert dbm_to_mw(a + b) == pytest.approx(dbm_to_mw(a) * dbm_to_mw(b), rel=1e-12)


def test_default_config_is_valid_and_validation_idempotent():
    cfg = default_config()
    assert cfg.eta == 1.0 and cfg.n_subcarriers == 4
    assert validate_config(cfg) is cfg
    assert validate_config(validate_config(cfg)) is cfg


def test_eta_out_of_range_reported():
    cfg = make_cfg(eta=1.5)
    with pytest.raises(ConfigError) as excinfo:
        validate_config(cfg)
    assert any("eta out of [0,1]" in err for err in excinfo.value.errors)


@pytest.mark.parametrize("dr", [0.0, 1.0, 1.5, -0.2])
def test_relay_position_bounds(dr):
    errors = config_errors(make_cfg(dr=dr))
    assert any("relay must lie strictly between" in err for err in errors)


def test_all_violations_reported_together():
    cfg = make_cfg(
        eta=2.0,
        dr=5.0,
        p_max=-1.0,
        n_subcarriers=0,
        noise=NoiseProfile(-1.0, 1.0, 1.0, 1.0),
    )
    errors = config_errors(cfg)
    for needle in ("eta", "dr", "p_max", "n_subcarriers", "noise.sigma_ra_sq"):
        assert any(needle in err for err in errors), needle


@given(
    st.floats(1e-6, 1e3),
    st.floats(1e-6, 1e3),
)
def test_noise_profile_destination_total_is_exact_sum(da, db):
    noise = NoiseProfile(1.0, 1.0, da, db)
    assert noise.sigma_d_sq == da + db


def test_config_json_round_trip():
    cfg = default_config()
    again = config_from_dict(config_to_dict(cfg))
    assert again == cfg


def test_config_load_from_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config_to_dict(default_config())))
    assert load_config(path) == default_config()


def test_p_max_mw_wins_over_dbm():
    data = config_to_dict(default_config())
    data["p_max_mw"] = 5.0
    data["p_max_dbm"] = 30.0
    assert config_from_dict(data).p_max == 5.0


def test_p_max_dbm_alone_is_converted():
    data = config_to_dict(default_config())
    del data["p_max_mw"]
    data["p_max_dbm"] = 10.0
    assert config_from_dict(data).p_max == pytest.approx(10.0, rel=1e-15)


def test_unknown_and_missing_keys_rejected():
    data = config_to_dict(default_config())
    data["p_mx_mw"] = 3.0
    with pytest.raises(ConfigError, match="unknown config keys"):
        config_from_dict(data)
    data = config_to_dict(default_config())
    del data["eta"]
    with pytest.raises(ConfigError, match="missing config keys"):
        config_from_dict(data)
    data = config_to_dict(default_config())
    del data["noise"]["sigma_db_sq"]
    with pytest.raises(ConfigError, match="missing noise key"):
        config_from_dict(data)


def test_pairing_must_be_permutation():
    SubcarrierPairing([2, 0, 1])
    with pytest.raises(ValueError):
        SubcarrierPairing([0, 0, 1])
    with pytest.raises(ValueError):
        SubcarrierPairing([1, 2, 3])


def test_channel_realization_invariants():
    chan = ChannelRealization([1.0, 2.0], [0.5, 0.0])
    assert chan.n_subcarriers == 2
    with pytest.raises(ValueError):
        chan.h_sq[0] = 9.0  # frozen storage
    with pytest.raises(ValueError):
        ChannelRealization([1.0, -2.0], [0.5, 0.1])
    with pytest.raises(ValueError):
        ChannelRealization([1.0, math.inf], [0.5, 0.1])
    with pytest.raises(ValueError):
        ChannelRealization([1.0, 2.0], [0.5])


def test_config_is_frozen():
    cfg = default_config()
    with pytest.raises(Exception):
        cfg.eta = 0.5
    assert replace(cfg, eta=0.5).eta == 0.5
