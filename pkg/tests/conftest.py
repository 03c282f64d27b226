"""Shared scenario builders for the test suite."""

from __future__ import annotations

import pytest

from edgesim.config import parse_scenario_dict


def scenario_dict(**overrides) -> dict:
    """A small, fast scenario; override fields per test."""
    base = {
        "duration_min": 10,
        "device_count": 50,
        "master_seed": 7,
        "policy": {"variant": "single-tier"},
        "access_points": [
            {"x_m": 0, "y_m": 0, "attractiveness_s": 180, "wlan_bandwidth_mbps": 200},
            {"x_m": 120, "y_m": 0, "attractiveness_s": 300, "wlan_bandwidth_mbps": 200},
            {"x_m": 0, "y_m": 120, "attractiveness_s": 120, "wlan_bandwidth_mbps": 200},
            {"x_m": 120, "y_m": 120, "attractiveness_s": 240, "wlan_bandwidth_mbps": 200},
        ],
        "edge": {"vms_per_ap": 2, "mips": 4000},
        "cloud": {"vm_count": 4, "mips": 20000},
        "network": {"wan_bandwidth_mbps": 500, "wan_propagation_s": 0.15},
        "profiles": [
            {
                "name": "demo",
                "weight": 1.0,
                "interarrival_mean_s": 20,
                "active_s": 40,
                "idle_s": 20,
                "upload_bytes": 1500000,
                "download_bytes": 300000,
                "length_mi": 6000,
                "vm_utilization_pct": 20,
                "cloud_probability": 0.3,
            }
        ],
        "snapshot_period_s": 60,
    }
    base.update(overrides)
    return base


def make_cfg(**overrides):
    return parse_scenario_dict(scenario_dict(**overrides))


@pytest.fixture
def small_cfg():
    return make_cfg()
