"""Dual-engine discrete-event simulator of edge/cloud task offloading.

Two interchangeable engines run the same scenario model. The baseline
engine precomputes every device trajectory and task arrival up front; the
event-driven engine materialises both lazily as the clock reaches them.
Matched random streams make the two statistically interchangeable, which
the validation harness checks with two-sample KS tests and Q-Q pairs.
"""

from edgesim.config import ScenarioConfig, load_scenario
from edgesim.engine import run_scenario
from edgesim.kernel import Event, EventKind, Kernel, RunStats
from edgesim.metrics import MetricsSummary

__all__ = [
    "Event",
    "EventKind",
    "Kernel",
    "MetricsSummary",
    "RunStats",
    "ScenarioConfig",
    "load_scenario",
    "run_scenario",
]

__version__ = "0.1.0"
