"""Embedded month-partitioned time-series store.

One partition per (BASID, POINTID, month). Cells are addressed by an
in-month count, ``floor(seconds_since_month_start / base_resolution)``,
rather than absolute timestamps; wide-row databases impose row size limits
that force this monthly split, and the count keeps cells compact.

Partitioning always happens on the UTC clock: wire timestamps carry local
offsets, so they are normalized before the count is derived.

Persistence is an append-only log (one line per put); the in-memory
partitions are rebuilt from it on startup.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import CapExceeded, StoreUnavailable
from .names import PointName

DEFAULT_BASE_RESOLUTION = 5  # seconds, matching 5 s sensor read intervals
DEFAULT_CELL_CAP = 1_000_000


def month_start(ts: datetime) -> datetime:
    ts = ts.astimezone(timezone.utc)
    return datetime(ts.year, ts.month, 1, tzinfo=timezone.utc)


def next_month(year: int, month: int) -> tuple[int, int]:
    return (year + 1, 1) if month == 12 else (year, month + 1)


@dataclass
class SeriesPartition:
    bas_id: str
    point_id: str
    month: tuple[int, int]
    base_resolution: int
    full_name: str
    cells: dict[int, float] = field(default_factory=dict)

    def timestamp_for(self, count: int) -> datetime:
        start = datetime(self.month[0], self.month[1], 1, tzinfo=timezone.utc)
        return datetime.fromtimestamp(
            start.timestamp() + count * self.base_resolution, tz=timezone.utc
        )


class StoreSnapshot:
    """Immutable copy of all partitions; iteration ordered by key then count."""

    def __init__(self, partitions: dict, base_resolution: int):
        self._partitions = partitions
        self.base_resolution = base_resolution

    def partitions(self) -> list[SeriesPartition]:
        return [self._partitions[k] for k in sorted(self._partitions)]

    def iter_samples(self):
        for part in self.partitions():
            for count in sorted(part.cells):
                yield part.full_name, part.timestamp_for(count), part.cells[count]

    def sample_count(self) -> int:
        return sum(len(p.cells) for p in self._partitions.values())

    def digest(self) -> str:
        """Content hash over every (name, count, value); equal iff state equal."""
        h = hashlib.md5()
        for name, ts, value in self.iter_samples():
            h.update(f"{name},{ts.timestamp():.0f},{value!r}\n".encode())
        return h.hexdigest()


class TimeSeriesStore:
    """Single-writer store with snapshot readers and doc-id dedup.

    ``available`` is a fault-injection switch: while False every write raises
    StoreUnavailable, which the ingest path converts into a journal append.
    """

    def __init__(
        self,
        base_resolution: int = DEFAULT_BASE_RESOLUTION,
        cell_cap: int = DEFAULT_CELL_CAP,
        log_path: str | Path | None = None,
    ):
        self.base_resolution = base_resolution
        self.cell_cap = cell_cap
        self.log_path = Path(log_path) if log_path else None
        self.available = True
        self.overwrites = 0
        self._partitions: dict[tuple[str, str, tuple[int, int]], SeriesPartition] = {}
        self._doc_ids: set[str] = set()
        self._lock = threading.Lock()
        if self.log_path and self.log_path.exists():
            self._replay_log()

    # -- write path ---------------------------------------------------------

    def put(self, name: PointName, timestamp: datetime, value: float) -> None:
        if timestamp.tzinfo is None:
            raise ValueError("timestamp must carry a UTC offset")
        if not self.available:
            raise StoreUnavailable("store is down")
        ts = timestamp.astimezone(timezone.utc)
        with self._lock:
            self._put_locked(name, ts, value)
            if self.log_path:
                with open(self.log_path, "a", encoding="utf-8") as f:
                    f.write(f"{name.canonical()},{int(ts.timestamp())},{value!r}\n")

    def _put_locked(self, name: PointName, ts: datetime, value: float) -> None:
        key = (name.bas_id, name.point_id, (ts.year, ts.month))
        part = self._partitions.get(key)
        if part is None:
            part = SeriesPartition(
                bas_id=name.bas_id,
                point_id=name.point_id,
                month=(ts.year, ts.month),
                base_resolution=self.base_resolution,
                full_name=name.canonical(),
            )
            self._partitions[key] = part
        count = int((ts - month_start(ts)).total_seconds() // self.base_resolution)
        if count in part.cells:
            self.overwrites += 1
        elif len(part.cells) >= self.cell_cap:
            raise CapExceeded(f"partition {key} at cap {self.cell_cap}")
        part.cells[count] = value

    def insert_event(self, name: PointName, timestamp: datetime, value: float, doc_id: str) -> bool:
        """Idempotent insert keyed by doc_id. Returns True iff the event is new."""
        if not self.available:
            raise StoreUnavailable("store is down")
        with self._lock:
            if doc_id in self._doc_ids:
                return False
        self.put(name, timestamp, value)
        with self._lock:
            self._doc_ids.add(doc_id)
        return True

    def contains(self, doc_id: str) -> bool:
        if not self.available:
            raise StoreUnavailable("store is down")
        return doc_id in self._doc_ids

    # -- read path ----------------------------------------------------------

    def query_range(self, bas_id: str, point_id: str, start: datetime, end: datetime):
        """Samples in [start, end), strictly increasing, spanning months."""
        if start > end:
            raise ValueError("start must be <= end")
        start = start.astimezone(timezone.utc)
        end = end.astimezone(timezone.utc)
        out = []
        year, month = start.year, start.month
        while (year, month) <= (end.year, end.month):
            part = self._partitions.get((bas_id, point_id, (year, month)))
            if part:
                for count in sorted(part.cells):
                    ts = part.timestamp_for(count)
                    if start <= ts < end:
                        out.append((ts, part.cells[count]))
            year, month = next_month(year, month)
        return out

    def snapshot(self) -> StoreSnapshot:
        with self._lock:
            frozen = {
                k: SeriesPartition(
                    bas_id=p.bas_id,
                    point_id=p.point_id,
                    month=p.month,
                    base_resolution=p.base_resolution,
                    full_name=p.full_name,
                    cells=dict(p.cells),
                )
                for k, p in self._partitions.items()
            }
        return StoreSnapshot(frozen, self.base_resolution)

    # -- persistence --------------------------------------------------------

    def _replay_log(self) -> None:
        from .names import parse_system_name

        with open(self.log_path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                name_text, unix_s, value = line.rsplit(",", 2)
                ts = datetime.fromtimestamp(int(unix_s), tz=timezone.utc)
                self._put_locked(parse_system_name(name_text), ts, float(value))


def decouple_rows(snapshot: StoreSnapshot) -> dict[str, list[tuple[datetime, float]]]:
    """Split a snapshot into independent per-point series, keyed by full name.

    The union of the returned series equals the snapshot contents, so batch
    jobs can run per series in any order (or in parallel).
    """
    series: dict[str, list[tuple[datetime, float]]] = {}
    for name, ts, value in snapshot.iter_samples():
        series.setdefault(name, []).append((ts, value))
    for samples in series.values():
        samples.sort(key=lambda p: p[0])
    return series
