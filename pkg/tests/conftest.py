import json

import pytest

from secrely.config import SystemConfig, reference_config

REFERENCE_CONFIG_JSON = {
    "n_relays": 5,
    "rho": 0.5,
    "avg_snr_sd_db": 10.0,
    "avg_snr_sr_db": 10.0,
    "avg_snr_rd_db": 10.0,
    "avg_snr_se_db": -5.0,
    "avg_snr_sb_db": -5.0,
    "avg_snr_be_db": -5.0,
    "target_rate": 2.0,
    "rate_prefactor": "half",
}


@pytest.fixture
def reference():
    return reference_config()


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(REFERENCE_CONFIG_JSON))
    return path


@pytest.fixture
def sweep_file(tmp_path):
    def make(**data):
        data.setdefault("axis", "avg_snr_sd_db")
        data.setdefault("linkage", {"c_to_sd": 0.5, "ce_to_se": 0.5})
        path = tmp_path / "sweep.json"
        path.write_text(json.dumps(data))
        return path
    return make


def combined(n_relays=5, rho=0.5, s=10.0, c=5.0, e=1.0, ce=0.5, rate=2.0, **kw):
    return SystemConfig.from_combined(n_relays, rho, s, c, e, ce, target_rate=rate, **kw)
