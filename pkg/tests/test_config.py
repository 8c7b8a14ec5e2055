import json

import pytest

from mapcsim import (SimulationConfig, TimingConfig, load_simulation_config,
                     save_simulation_config)
from mapcsim.config import simulation_config_from_dict


def test_load_full_config(tmp_path):
    data = {
        "scenario": {"subarea_rows": 2, "subarea_cols": 2, "noise_dbm": -90.0},
        "timing": {"period_ms": 4.0, "txop_max_ms": 2.0, "num_txops": 100},
        "traffic": {"load_bps_per_sta": 2e6},
        "gamma_db": 14.0,
        "max_group_size": 2,
        "scheduler": "oldpk-single",
        "seed": 42,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data))
    config = load_simulation_config(path)
    assert config.scenario.subarea_rows == 2
    assert config.scenario.noise_dbm == -90.0
    assert config.timing.period_ms == 4.0
    assert config.traffic.load_bps_per_sta == 2e6
    assert (config.gamma_db, config.max_group_size) == (14.0, 2)
    assert config.scheduler == "oldpk-single"
    assert config.seed == 42


def test_mcs_table_override(tmp_path):
    data = {"mcs_table": [[0, 3.0, 100.0], [1, 9.0, 200.0]]}
    config = simulation_config_from_dict(data)
    assert len(config.mcs_table) == 2
    assert config.mcs_table.min_sinrs == (3.0, 9.0)


def test_save_load_roundtrip(tmp_path):
    config = SimulationConfig(gamma_db=17.0, scheduler="ctdma-oldpk", seed=5)
    path = tmp_path / "config.json"
    save_simulation_config(config, path)
    assert load_simulation_config(path) == config


def test_unknown_keys_rejected():
    with pytest.raises(ValueError, match="bogus"):
        simulation_config_from_dict({"timing": {"bogus": 1}})
    with pytest.raises(ValueError, match="sections"):
        simulation_config_from_dict({"extra_section": {}})


def test_timing_invariants():
    with pytest.raises(ValueError):
        TimingConfig(txop_max_ms=5.0, period_ms=5.0)
    with pytest.raises(ValueError):
        TimingConfig(map_tf_us=0.0)
    with pytest.raises(ValueError):
        TimingConfig(num_txops=0)
    assert TimingConfig().handshake_us == 80 + 9 + 62 + 9


def test_missing_file_is_reported():
    with pytest.raises(ValueError, match="cannot read"):
        load_simulation_config("/nonexistent/config.json")
