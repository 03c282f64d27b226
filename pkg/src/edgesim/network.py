"""Transfer delay model for the wireless hop and the WAN backhaul.

Fair-share division: n contenders each see nominal/n bandwidth, with a
hard capacity cutoff beyond which the transfer fails outright. Delay is
computed once from the state at transfer start and never re-evaluated;
between events the state is constant by the discrete-event contract.

Failures are modeled outcomes carried in the return value, not
exceptions.
"""

from __future__ import annotations

from enum import Enum
from typing import Union


class NetworkFailure(Enum):
    WLAN_CONGESTION = "wlan-congestion"
    WAN_CONGESTION = "wan-congestion"


Delay = Union[float, NetworkFailure]


class NetworkState:
    """WAN bookkeeping plus a read-only view of per-AP device counts.

    active_wan_transfers is incremented when a WAN leg starts and
    decremented when it completes; it must return to zero once a run
    drains.
    """

    def __init__(
        self,
        mobility,
        wan_bandwidth_mbps: float,
        wan_propagation_s: float,
        wlan_device_capacity: float = 100,
        wan_transfer_capacity: float = 50,
    ) -> None:
        if wan_bandwidth_mbps <= 0:
            raise ValueError("wan_bandwidth_mbps must be positive")
        if wan_propagation_s < 0:
            raise ValueError("wan_propagation_s must be non-negative")
        self.mobility = mobility
        self.wan_bandwidth_mbps = wan_bandwidth_mbps
        self.wan_propagation_s = wan_propagation_s
        self.wlan_device_capacity = wlan_device_capacity
        self.wan_transfer_capacity = wan_transfer_capacity
        self.active_wan_transfers = 0

    def wlan_delay(self, loc: int, nbytes: int, now: float) -> Delay:
        """Wireless hop at access point `loc`.

        The device count includes the sender itself, so n >= 1 whenever
        this is called for a device present at loc.
        """
        if nbytes <= 0:
            raise ValueError("nbytes must be positive")
        n = self.mobility.count_at(loc, now)
        if n > self.wlan_device_capacity:
            return NetworkFailure.WLAN_CONGESTION
        bw = self.mobility.aps[loc].wlan_bandwidth_mbps
        return 8.0 * nbytes * n / (bw * 1e6)

    def wan_delay(self, nbytes: int) -> Delay:
        """Backhaul leg; the new transfer counts itself among the contenders."""
        if nbytes <= 0:
            raise ValueError("nbytes must be positive")
        m = self.active_wan_transfers + 1
        if m > self.wan_transfer_capacity:
            return NetworkFailure.WAN_CONGESTION
        return self.wan_propagation_s + 8.0 * nbytes * m / (
            self.wan_bandwidth_mbps * 1e6
        )

    def wan_start(self) -> None:
        self.active_wan_transfers += 1

    def wan_end(self) -> None:
        if self.active_wan_transfers <= 0:
            raise RuntimeError("WAN transfer counter underflow")
        self.active_wan_transfers -= 1
