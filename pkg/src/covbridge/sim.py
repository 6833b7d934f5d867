"""Simulated BAS field network: signal generators, COV thresholding, and the
controller -> buffer -> streamer pipeline, with fault injection.

Sim-time is accelerated (no wall-clock sleeps); every run is a deterministic
function of (scenario, seed), so acceptance checks can compare the sink's
contents against the report's ground truth line-for-line.
"""

from __future__ import annotations

import json
import random
import socket
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone

from .events import WIRE_TS_FORMAT

DEFAULT_SAMPLE_INTERVAL = 5  # seconds


# -- signal generators -------------------------------------------------------

@dataclass(frozen=True)
class Constant:
    value_: float

    def value(self, t: float) -> float:
        return self.value_


@dataclass(frozen=True)
class Ramp:
    slope: float

    def value(self, t: float) -> float:
        return self.slope * t


@dataclass(frozen=True)
class Sine:
    amplitude: float
    period: float
    offset: float = 0.0

    def value(self, t: float) -> float:
        import math

        return self.offset + self.amplitude * math.sin(2 * math.pi * t / self.period)


@dataclass(frozen=True)
class Schedule:
    """Occupancy-style pattern: integer {0,1} slots of fixed width."""

    pattern: tuple[int, ...]
    slot_seconds: float = 3600.0

    def value(self, t: float) -> float:
        idx = int(t // self.slot_seconds) % len(self.pattern)
        return float(self.pattern[idx])


def generator_from_config(cfg: dict):
    kind = cfg["type"]
    if kind == "constant":
        return Constant(cfg["value"])
    if kind == "ramp":
        return Ramp(cfg["slope"])
    if kind == "sine":
        return Sine(cfg["amplitude"], cfg["period"], cfg.get("offset", 0.0))
    if kind == "schedule":
        return Schedule(tuple(cfg["pattern"]), cfg.get("slot_seconds", 3600.0))
    raise ValueError(f"unknown generator type {kind!r}")


# -- points and COV thresholding --------------------------------------------

@dataclass
class SimPoint:
    network_name: str  # canonical network-context text
    system_name: str   # canonical system-context text (for the lookup table)
    generator: object
    cov_threshold: float = 0.0
    noise_sigma: float = 0.0
    sample_interval: float = DEFAULT_SAMPLE_INTERVAL

    def __post_init__(self):
        if self.cov_threshold < 0:
            raise ValueError("cov_threshold must be >= 0")
        if self.sample_interval <= 0:
            raise ValueError("sample_interval must be > 0")

    def device_id(self) -> str:
        return self.network_name.split("/", 1)[0]


@dataclass
class PointState:
    rng: random.Random
    last_emitted: float | None = None


def tick(point: SimPoint, state: PointState, t: float, start_time: datetime) -> str | None:
    """Sample the point at sim-time t; emit a wire line on change of value.

    The first sample always emits; afterwards only a change strictly greater
    than the threshold does.
    """
    value = point.generator.value(t)
    if point.noise_sigma > 0:
        value += state.rng.gauss(0.0, point.noise_sigma)
    if state.last_emitted is not None and abs(value - state.last_emitted) <= point.cov_threshold:
        return None
    state.last_emitted = value
    ts = (start_time + timedelta(seconds=t)).strftime(WIRE_TS_FORMAT)
    return f"{ts},{point.device_id()},{point.network_name},{value:.5f}"


# -- buffer and streamer -----------------------------------------------------

@dataclass
class Buffer:
    """Time-synchronized batch buffer between controller and streamer."""

    window_seconds: float
    contents: list[str] = field(default_factory=list)

    def push(self, line: str) -> None:
        self.contents.append(line)

    def drain(self) -> list[str]:
        batch, self.contents = self.contents, []
        return batch


@dataclass
class FaultSchedule:
    """Sim-time windows where the sink is unreachable, plus duplicated sends."""

    down_windows: list[tuple[float, float]] = field(default_factory=list)
    duplicate_fraction: float = 0.0

    def sink_down(self, t: float) -> bool:
        return any(lo <= t < hi for lo, hi in self.down_windows)


@dataclass
class RunReport:
    emissions: list[str] = field(default_factory=list)
    sent: list[str] = field(default_factory=list)
    unsent: list[str] = field(default_factory=list)
    duplicates: int = 0
    acked: int = 0


def _send_line(sink: tuple[str, int], line: str, timeout: float = 10.0) -> bool:
    with socket.create_connection(sink, timeout=timeout) as sock:
        sock.sendall(line.encode("utf-8") + b"\n")
        sock.shutdown(socket.SHUT_WR)
        return sock.recv(1) == b"1"


@dataclass
class Scenario:
    points: list[SimPoint]
    horizon: float
    seed: int = 0
    start_time: datetime = datetime(2020, 1, 27, tzinfo=timezone.utc)
    batch_window: float | None = None  # default: 10 x min sample interval
    faults: FaultSchedule = field(default_factory=FaultSchedule)

    @classmethod
    def from_json(cls, path) -> "Scenario":
        with open(path, encoding="utf-8") as f:
            cfg = json.load(f)
        points = [
            SimPoint(
                network_name=p["network"],
                system_name=p["system"],
                generator=generator_from_config(p["generator"]),
                cov_threshold=p.get("cov_threshold", 0.0),
                noise_sigma=p.get("noise_sigma", 0.0),
                sample_interval=p.get("sample_interval", DEFAULT_SAMPLE_INTERVAL),
            )
            for p in cfg["points"]
        ]
        faults_cfg = cfg.get("faults", {})
        faults = FaultSchedule(
            down_windows=[tuple(w) for w in faults_cfg.get("down_windows", [])],
            duplicate_fraction=faults_cfg.get("duplicate_fraction", 0.0),
        )
        start = datetime.strptime(cfg["start_time"], WIRE_TS_FORMAT) if "start_time" in cfg \
            else datetime(2020, 1, 27, tzinfo=timezone.utc)
        return cls(
            points=points,
            horizon=cfg["horizon"],
            seed=cfg.get("seed", 0),
            start_time=start,
            batch_window=cfg.get("batch_window"),
            faults=faults,
        )

    def lookup_pairs(self) -> list[tuple[str, str]]:
        return [(p.network_name, p.system_name) for p in self.points]


def stream(scenario: Scenario, sink: tuple[str, int] | None,
           send=_send_line) -> RunReport:
    """Run the controller/buffer/streamer loop over the scenario horizon.

    ``send`` is injectable so tests can observe or fail individual sends;
    a None sink collects emissions without any network traffic.
    """
    points = scenario.points
    states = {
        p.network_name: PointState(rng=random.Random((scenario.seed, p.network_name).__repr__()))
        for p in points
    }
    fault_rng = random.Random((scenario.seed, "faults").__repr__())
    min_interval = min(p.sample_interval for p in points)
    window = scenario.batch_window or 10 * min_interval
    buffer = Buffer(window_seconds=window)
    report = RunReport()

    def flush(t: float) -> None:
        if sink is None:
            buffer.drain()
            return
        if scenario.faults.sink_down(t):
            return  # retained in buffer; retried at the next flush
        for line in buffer.drain():
            copies = 1
            if fault_rng.random() < scenario.faults.duplicate_fraction:
                copies = 2
                report.duplicates += 1
            for _ in range(copies):
                report.sent.append(line)
                if send(sink, line):
                    report.acked += 1

    next_flush = window
    # merged monotone sweep over every point's sample times
    ticks: list[tuple[float, int, SimPoint]] = []
    for idx, p in enumerate(points):
        n = 0
        while n * p.sample_interval <= scenario.horizon:
            ticks.append((n * p.sample_interval, idx, p))
            n += 1
    ticks.sort(key=lambda item: (item[0], item[1]))
    for t, _, p in ticks:
        while t >= next_flush:
            flush(next_flush)
            next_flush += window
        line = tick(p, states[p.network_name], t, scenario.start_time)
        if line is not None:
            report.emissions.append(line)
            buffer.push(line)
    flush(scenario.horizon)
    report.unsent = buffer.drain()
    return report
