"""Discrete-event core: simulation clock, future event queue, dispatch loop.

The kernel is the only place simulated state is allowed to change: handlers
run when an event is dispatched and may schedule further events, never
earlier than the current clock. Everything is single-threaded; one kernel
instance drives one run and shares nothing, so independent runs may execute
concurrently on separate kernels.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass
from enum import IntEnum
from heapq import heappop, heappush
from typing import Any, Callable, NamedTuple, Optional


class EventKind(IntEnum):
    """Event taxonomy shared by both engines.

    TASK_ARRIVAL and the three lifecycle kinds occur in every run; the
    remaining kinds drive the event-driven engine only.
    """

    TASK_ARRIVAL = 0
    UPLOAD_DONE = 1
    EXEC_DONE = 2
    DOWNLOAD_DONE = 3
    DEVICE_MOVE = 4
    ACTIVE_PERIOD_START = 5
    LOCATION_SNAPSHOT = 6


#: Kinds that complete work already in flight. These are the only events
#: allowed to dispatch past the horizon, so service-time accounting is
#: never truncated by the end of the scenario.
LIFECYCLE_KINDS = frozenset(
    {EventKind.UPLOAD_DONE, EventKind.EXEC_DONE, EventKind.DOWNLOAD_DONE}
)


class Event(NamedTuple):
    """One scheduled unit of work.

    Tuple layout (time, seq, ...) makes heap ordering non-decreasing in
    time with FIFO tie-breaking by sequence number; seq is unique, so the
    payload is never compared.
    """

    time: float
    seq: int
    kind: int
    payload: Any = None


class SchedulingInPast(ValueError):
    """An event was scheduled before the current simulation time."""


@dataclass
class RunStats:
    """Instrumentation for one dispatch loop.

    wall_time brackets the dispatch loop only; model setup and file I/O
    are excluded by construction.
    """

    events_dispatched: int = 0
    events_dropped: int = 0
    peak_queue_size: int = 0
    wall_time: float = 0.0


class Kernel:
    """Simulation clock plus future event queue.

    Counters satisfy ``scheduled == dispatched + dropped + remaining`` at
    every observation point; dropped stays zero until the run crosses the
    horizon.
    """

    def __init__(self) -> None:
        self.now: float = 0.0
        self._heap: list[Event] = []
        self._next_seq: int = 0
        self.scheduled_count: int = 0
        self.dispatched_count: int = 0
        self.dropped_count: int = 0
        self.peak_size: int = 0

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, when: float, kind: int, payload: Any = None) -> int:
        """Enqueue an event and return its sequence number."""
        if when < self.now:
            raise SchedulingInPast(
                f"cannot schedule at t={when!r}: clock is at t={self.now!r}"
            )
        seq = self._next_seq
        self._next_seq += 1
        heappush(self._heap, Event(when, seq, kind, payload))
        self.scheduled_count += 1
        if len(self._heap) > self.peak_size:
            self.peak_size = len(self._heap)
        return seq

    def pop_next(self) -> Optional[Event]:
        """Remove and return the minimum (time, seq) event, advancing the clock."""
        if not self._heap:
            return None
        ev = heappop(self._heap)
        self.now = ev.time
        return ev

    def run(self, horizon: float, handler: Callable[[Event], None]) -> RunStats:
        """Dispatch events in (time, seq) order until the queue drains.

        Past the horizon only lifecycle events still dispatch; any other
        kind is dropped unseen, which cuts the self-perpetuating movement
        and period chains and guarantees termination. Handler errors
        propagate and abort the run.
        """
        heap = self._heap
        lifecycle = LIFECYCLE_KINDS
        t0 = _time.perf_counter()
        while heap:
            ev = heappop(heap)
            if ev.time > horizon and ev.kind not in lifecycle:
                self.dropped_count += 1
                continue
            self.now = ev.time
            self.dispatched_count += 1
            handler(ev)
        wall = _time.perf_counter() - t0
        return RunStats(
            events_dispatched=self.dispatched_count,
            events_dropped=self.dropped_count,
            peak_queue_size=self.peak_size,
            wall_time=wall,
        )
