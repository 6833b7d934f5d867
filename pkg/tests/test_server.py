import socket
from concurrent.futures import ThreadPoolExecutor

import pytest

from covbridge.server import CovServer
from conftest import wire_line


@pytest.fixture
def server(pipeline):
    srv = CovServer(("127.0.0.1", 0), pipeline)
    srv.start()
    yield srv
    srv.stop()


def send(address, line: str, timeout=5.0) -> bytes:
    with socket.create_connection(address, timeout=timeout) as sock:
        sock.sendall(line.encode() + b"\n")
        sock.shutdown(socket.SHUT_WR)
        return sock.recv(1)


class TestServe:
    def test_valid_line_gets_one_ack_byte(self, server):
        assert send(server.server_address, wire_line(1)) == b"1"
        assert server.pipeline.store.snapshot().sample_count() == 1

    def test_garbage_gets_no_reply(self, server):
        assert send(server.server_address, "definitely not an event") == b""
        assert server.pipeline.quarantine_path.read_text().strip() == "definitely not an event"
        assert server.pipeline.store.snapshot().sample_count() == 0

    def test_deferred_still_acked(self, server):
        server.pipeline.store.available = False
        assert send(server.server_address, wire_line(1)) == b"1"
        assert len(server.pipeline.journal) == 1

    def test_no_trailing_newline(self, server):
        with socket.create_connection(server.server_address, timeout=5) as sock:
            sock.sendall(wire_line(2).encode())  # EOF-terminated
            sock.shutdown(socket.SHUT_WR)
            assert sock.recv(1) == b"1"

    def test_concurrent_connections(self, server):
        lines = [wire_line(i % 5 + 1, second=5 * i) for i in range(200)]
        with ThreadPoolExecutor(max_workers=32) as pool:
            replies = list(pool.map(lambda l: send(server.server_address, l), lines))
        assert replies == [b"1"] * 200
        assert server.pipeline.store.snapshot().sample_count() == 200

    def test_per_connection_errors_do_not_crash(self, server):
        send(server.server_address, "\x00\xff garbage")
        assert send(server.server_address, wire_line(3)) == b"1"


class TestPersistentMode:
    def test_many_lines_one_connection(self, pipeline):
        srv = CovServer(("127.0.0.1", 0), pipeline, persistent=True)
        srv.start()
        try:
            lines = [wire_line(i % 5 + 1, second=5 * i) for i in range(50)]
            with socket.create_connection(srv.server_address, timeout=5) as sock:
                payload = "".join(line + "\n" for line in lines).encode()
                sock.sendall(payload)
                sock.shutdown(socket.SHUT_WR)
                acks = b""
                while True:
                    chunk = sock.recv(64)
                    if not chunk:
                        break
                    acks += chunk
            assert acks == b"1" * 50
            assert pipeline.store.snapshot().sample_count() == 50
        finally:
            srv.stop()
