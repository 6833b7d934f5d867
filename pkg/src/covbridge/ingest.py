"""Ingest pipeline: parse -> resolve -> doc id -> store, with backup-on-failure.

Receipt acknowledgement and durability are deliberately separate: an event
that cannot reach the store is journaled and still acked, because the ack
only confirms packet arrival. Conservation then holds for any fault
schedule: every accepted event is either in the store or in the journal.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import (
    BackupWriteFailure,
    BadTimestamp,
    BadValue,
    MalformedLine,
    MalformedName,
    StoreUnavailable,
    UnknownPoint,
)
from .events import CovEvent, parse_cov_line, with_doc_id
from .journal import BackupJournal
from .names import LookupTable, PointName
from .store import TimeSeriesStore

log = logging.getLogger(__name__)


class IngestResult(Enum):
    ACK = "ack"
    DEFERRED = "deferred"
    REJECTED = "rejected"


@dataclass
class ReplayReport:
    replayed: int = 0
    deduped: int = 0
    remaining: int = 0


@dataclass
class IngestPipeline:
    lookup: LookupTable
    store: TimeSeriesStore
    journal: BackupJournal
    quarantine_path: Path | None = None
    rejections: dict[str, int] = field(default_factory=dict)
    _commit_lock: threading.Lock = field(default_factory=threading.Lock)

    def process_line(self, raw: str) -> IngestResult:
        """Full per-line path as run by the TCP server."""
        try:
            event = with_doc_id(parse_cov_line(raw))
            name = self.lookup.resolve(event.network_point)
        except (MalformedLine, BadTimestamp, BadValue, MalformedName, UnknownPoint) as exc:
            self._reject(raw, exc)
            return IngestResult.REJECTED
        return self.ingest(event, name)

    def ingest(self, event: CovEvent, name: PointName) -> IngestResult:
        """Idempotent insert by doc_id; journal the canonical line on failure.

        BackupWriteFailure propagates: with neither store nor journal there
        is nothing to ack, the sender must retry.
        """
        with self._commit_lock:
            try:
                self.store.insert_event(name, event.timestamp, event.value, event.doc_id)
                return IngestResult.ACK
            except StoreUnavailable:
                self.journal.append(event.canonical_line())
                return IngestResult.DEFERRED

    def replay_backup(self) -> ReplayReport:
        """Drain the journal into the store, verifying each insert.

        A line is dropped from the journal only after the store reads the
        doc_id back; a mid-replay store failure leaves the tail in place.
        """
        report = ReplayReport()
        with self._commit_lock:
            pending = self.journal.pending()
            done = 0
            for line in pending:
                event = with_doc_id(parse_cov_line(line))
                name = self.lookup.resolve(event.network_point)
                try:
                    fresh = self.store.insert_event(
                        name, event.timestamp, event.value, event.doc_id
                    )
                    if not self.store.contains(event.doc_id):
                        break  # insert not visible; keep the line
                except StoreUnavailable:
                    break
                if fresh:
                    report.replayed += 1
                else:
                    report.deduped += 1
                done += 1
            tail = pending[done:]
            report.remaining = len(tail)
            self.journal.rewrite(tail)
        return report

    def _reject(self, raw: str, exc: Exception) -> None:
        kind = type(exc).__name__
        self.rejections[kind] = self.rejections.get(kind, 0) + 1
        log.warning("rejected line (%s): %r", kind, raw.strip())
        if self.quarantine_path:
            try:
                with open(self.quarantine_path, "a", encoding="utf-8") as f:
                    f.write(raw.rstrip("\n") + "\n")
            except OSError as io_exc:
                raise BackupWriteFailure(str(io_exc)) from io_exc
