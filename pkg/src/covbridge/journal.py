"""Backup journal: canonical wire lines appended when a store write fails.

The journal reuses the wire format, one line per event, so replay goes
through the same parser as live ingest. Lines are removed only after the
insert has been read back from the store.
"""

from __future__ import annotations

import os
from pathlib import Path

from .errors import BackupWriteFailure


class BackupJournal:
    def __init__(self, path: str | Path):
        self.path = Path(path)

    def append(self, line: str) -> None:
        try:
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(line.rstrip("\n") + "\n")
                f.flush()
                os.fsync(f.fileno())
        except OSError as exc:
            raise BackupWriteFailure(str(exc)) from exc

    def pending(self) -> list[str]:
        if not self.path.exists():
            return []
        with open(self.path, encoding="utf-8") as f:
            return [line.rstrip("\n") for line in f if line.strip()]

    def rewrite(self, lines: list[str]) -> None:
        """Atomically replace the journal contents (used after replay)."""
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        with open(tmp, "w", encoding="utf-8") as f:
            for line in lines:
                f.write(line + "\n")
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, self.path)

    def __len__(self) -> int:
        return len(self.pending())
