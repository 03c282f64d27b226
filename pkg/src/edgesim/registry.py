"""In-flight task lookup, two strategies.

Append-only reproduces the inefficiency being benchmarked: records are
never removed, and every id lookup is a linear scan from the front. The
pruned strategy drops records on retirement and resolves ids through a
map. Both count probes (elements inspected) so the asymptotic gap can be
asserted rather than eyeballed.
"""

from __future__ import annotations

from typing import Optional

from edgesim.compute import TaskRecord, TaskStatus


class DuplicateId(ValueError):
    pass


class UnknownId(KeyError):
    pass


class NotTerminal(ValueError):
    pass


class AppendOnlyRegistry:
    """Baseline: grow-only list, linear id scans.

    list.index runs the scan at C speed, but the probe accounting is the
    same as an explicit loop: finding position i costs i+1 probes.
    """

    strategy = "append-only"

    def __init__(self) -> None:
        self._ids: list[int] = []
        self._records: list[TaskRecord] = []
        self._known: set[int] = set()  # duplicate guard only, not a lookup path
        self.peak_size = 0
        self.probes = 0

    def __len__(self) -> int:
        return len(self._records)

    def register(self, record: TaskRecord) -> None:
        tid = record.props.task_id
        if tid in self._known:
            raise DuplicateId(f"task id {tid} already registered")
        self._known.add(tid)
        self._ids.append(tid)
        self._records.append(record)
        if len(self._records) > self.peak_size:
            self.peak_size = len(self._records)

    def lookup(self, task_id: int) -> Optional[TaskRecord]:
        try:
            pos = self._ids.index(task_id)
        except ValueError:
            self.probes += len(self._ids)
            return None
        self.probes += pos + 1
        return self._records[pos]

    def retire(self, task_id: int) -> None:
        record = self.lookup(task_id)
        if record is None:
            raise UnknownId(task_id)
        if record.status is TaskStatus.IN_FLIGHT:
            raise NotTerminal(f"task {task_id} still in flight")
        # Faithful to the original defect: the record stays in the list.


class PrunedRegistry:
    """Renovated: keyed storage, retired records removed immediately."""

    strategy = "pruned"

    def __init__(self) -> None:
        self._records: dict[int, TaskRecord] = {}
        self.peak_size = 0
        self.probes = 0

    def __len__(self) -> int:
        return len(self._records)

    def register(self, record: TaskRecord) -> None:
        tid = record.props.task_id
        if tid in self._records:
            raise DuplicateId(f"task id {tid} already registered")
        self._records[tid] = record
        if len(self._records) > self.peak_size:
            self.peak_size = len(self._records)

    def lookup(self, task_id: int) -> Optional[TaskRecord]:
        self.probes += 1
        return self._records.get(task_id)

    def retire(self, task_id: int) -> None:
        record = self.lookup(task_id)
        if record is None:
            raise UnknownId(task_id)
        if record.status is TaskStatus.IN_FLIGHT:
            raise NotTerminal(f"task {task_id} still in flight")
        del self._records[task_id]


def make_registry(strategy: str):
    if strategy == "append-only":
        return AppendOnlyRegistry()
    if strategy == "pruned":
        return PrunedRegistry()
    raise ValueError(f"unknown registry strategy: {strategy!r}")
