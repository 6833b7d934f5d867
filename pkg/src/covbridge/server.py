"""TCP ingest server: one change-of-value line per connection, one ack byte back.

The wire carries nothing back except the single '1' ack, sent for both
stored and journaled (deferred) events. Malformed input gets no reply at
all. A persistent newline-delimited mode exists for throughput tests; the
default matches the one-connection-per-event framing of the production
streamer.
"""

from __future__ import annotations

import logging
import socketserver
import threading

from .errors import BackupWriteFailure
from .ingest import IngestPipeline, IngestResult

log = logging.getLogger(__name__)

ACK_BYTE = b"1"
MAX_LINE = 64 * 1024


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        server: CovServer = self.server  # type: ignore[assignment]
        try:
            if server.persistent:
                for raw in self.rfile:
                    if not self._process(server, raw):
                        return
            else:
                raw = self.rfile.readline(MAX_LINE)
                self._process(server, raw)
        except (ConnectionError, OSError) as exc:
            log.debug("connection error: %s", exc)

    def _process(self, server: "CovServer", raw: bytes) -> bool:
        try:
            line = raw.decode("utf-8")
        except UnicodeDecodeError:
            return False
        if not line.strip():
            return False
        try:
            result = server.pipeline.process_line(line)
        except BackupWriteFailure:
            return False  # no ack; sender retries
        except Exception:
            log.exception("unexpected error handling line")
            return False
        if result in (IngestResult.ACK, IngestResult.DEFERRED):
            self.wfile.write(ACK_BYTE)
            self.wfile.flush()
            return True
        return False


class CovServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True
    request_queue_size = 256

    def __init__(self, bind_address: tuple[str, int], pipeline: IngestPipeline,
                 persistent: bool = False):
        self.pipeline = pipeline
        self.persistent = persistent
        super().__init__(bind_address, _Handler)
        self._thread: threading.Thread | None = None

    def start(self) -> None:
        """Serve in a background thread (for tests and embedding)."""
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self.shutdown()
        self.server_close()
        if self._thread:
            self._thread.join(timeout=5)


def serve(bind_address: tuple[str, int], pipeline: IngestPipeline,
          persistent: bool = False) -> None:
    """Run the server until interrupted."""
    with CovServer(bind_address, pipeline, persistent=persistent) as srv:
        log.info("listening on %s:%d", *bind_address)
        srv.serve_forever()
