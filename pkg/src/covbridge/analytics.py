"""Batch summarization over store snapshots.

Four metrics (average, min, max, deficiency count) at hourly / daily /
monthly granularity on the UTC clock. Counts follow threshold + time-delay
rules: a violation episode is a run of consecutive violating samples that
holds for at least the rule's delay, counted once in the period where the
run starts. A silence gap longer than twice the store's base resolution
breaks a run: a quiet sensor is not evidence of violation.

Averages are computed unconditionally; for data that is not normally
distributed (or for {0,1} state points, where the average reads as a duty
fraction) interpret them accordingly.
"""

from __future__ import annotations

import fnmatch
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from .names import parse_system_name
from .store import StoreSnapshot, decouple_rows

Series = list[tuple[datetime, float]]


class Granularity(Enum):
    HOURLY = "hourly"
    DAILY = "daily"
    MONTHLY = "monthly"

    def period_start(self, ts: datetime) -> datetime:
        ts = ts.astimezone(timezone.utc)
        if self is Granularity.HOURLY:
            return ts.replace(minute=0, second=0, microsecond=0)
        if self is Granularity.DAILY:
            return ts.replace(hour=0, minute=0, second=0, microsecond=0)
        return ts.replace(day=1, hour=0, minute=0, second=0, microsecond=0)


@dataclass(frozen=True)
class DeficiencyRule:
    """Threshold + delay rule; severity 1 is high-level/minor, larger is worse."""

    point_selector: str  # fnmatch pattern over POINTID
    comparator: str      # '>', '<' or 'outside'
    threshold: float = 0.0
    lo: float = 0.0
    hi: float = 0.0
    time_delay: float = 0.0
    severity: int = 1
    mode: str = "episodes"  # or "samples"

    def __post_init__(self):
        if self.time_delay < 0:
            raise ValueError("time_delay must be >= 0")
        if self.comparator not in (">", "<", "outside"):
            raise ValueError(f"unknown comparator {self.comparator!r}")
        if self.comparator == "outside" and not self.lo < self.hi:
            raise ValueError("outside needs lo < hi")

    def violates(self, value: float) -> bool:
        if self.comparator == ">":
            return value > self.threshold
        if self.comparator == "<":
            return value < self.threshold
        return value < self.lo or value > self.hi

    def matches(self, point_id: str) -> bool:
        return fnmatch.fnmatchcase(point_id, self.point_selector)


@dataclass(frozen=True)
class SummaryRecord:
    period_start: datetime
    point: str  # full system-context name
    metric: str
    value: float


def _group_by_period(series: Series, granularity: Granularity):
    groups: dict[datetime, list[float]] = {}
    for ts, value in series:
        groups.setdefault(granularity.period_start(ts), []).append(value)
    return groups


def summarize_avg(series: Series, granularity: Granularity, point: str = "") -> list[SummaryRecord]:
    return [
        SummaryRecord(period, point, "avg", sum(vals) / len(vals))
        for period, vals in sorted(_group_by_period(series, granularity).items())
    ]


def summarize_min(series: Series, granularity: Granularity, point: str = "") -> list[SummaryRecord]:
    return [
        SummaryRecord(period, point, "min", min(vals))
        for period, vals in sorted(_group_by_period(series, granularity).items())
    ]


def summarize_max(series: Series, granularity: Granularity, point: str = "") -> list[SummaryRecord]:
    return [
        SummaryRecord(period, point, "max", max(vals))
        for period, vals in sorted(_group_by_period(series, granularity).items())
    ]


def find_episodes(series: Series, rule: DeficiencyRule, gap_limit: float) -> list[datetime]:
    """Start timestamps of violation episodes (runs holding >= time_delay)."""
    episodes: list[datetime] = []
    run_start: datetime | None = None
    run_end: datetime | None = None
    last_ts: datetime | None = None

    def close_run():
        nonlocal run_start, run_end
        if run_start is not None and (run_end - run_start).total_seconds() >= rule.time_delay:
            episodes.append(run_start)
        run_start = run_end = None

    for ts, value in series:
        if last_ts is not None and (ts - last_ts).total_seconds() > gap_limit:
            close_run()
        if rule.violates(value):
            if run_start is None:
                run_start = ts
            run_end = ts
        else:
            close_run()
        last_ts = ts
    close_run()
    return episodes


def summarize_count(series: Series, rule: DeficiencyRule, granularity: Granularity,
                    gap_limit: float, point: str = "") -> list[SummaryRecord]:
    """Episode count per period; periods containing samples emit 0 records.

    ``rule.mode == "samples"`` switches to plain violating-sample counts
    (the delay is ignored there), kept selectable because both readings of
    "count" are defensible.
    """
    counts = {period: 0 for period in _group_by_period(series, granularity)}
    if rule.mode == "samples":
        for ts, value in series:
            if rule.violates(value):
                counts[granularity.period_start(ts)] += 1
    else:
        for start in find_episodes(series, rule, gap_limit):
            counts[granularity.period_start(start)] += 1
    return [
        SummaryRecord(period, point, "count", float(n))
        for period, n in sorted(counts.items())
    ]


@dataclass
class SummaryTable:
    metric: str
    granularity: Granularity
    values: dict[tuple[datetime, str], float] = field(default_factory=dict)

    def insert(self, records: list[SummaryRecord]) -> None:
        for rec in records:
            self.values[(rec.period_start, rec.point)] = rec.value

    def periods(self) -> list[datetime]:
        return sorted({period for period, _ in self.values})


@dataclass
class JobSpec:
    metrics: list[str]
    granularities: list[Granularity]
    rules: list[DeficiencyRule] = field(default_factory=list)

    @classmethod
    def from_json(cls, path) -> "JobSpec":
        with open(path, encoding="utf-8") as f:
            cfg = json.load(f)
        rules = [
            DeficiencyRule(
                point_selector=r["point"],
                comparator=r["comparator"],
                threshold=r.get("threshold", 0.0),
                lo=r.get("lo", 0.0),
                hi=r.get("hi", 0.0),
                time_delay=r.get("time_delay", 0.0),
                severity=r.get("severity", 1),
                mode=r.get("mode", "episodes"),
            )
            for r in cfg.get("rules", [])
        ]
        return cls(
            metrics=cfg["metrics"],
            granularities=[Granularity(g) for g in cfg["granularities"]],
            rules=rules,
        )


_SUMMARIZERS = {"avg": summarize_avg, "min": summarize_min, "max": summarize_max}


def run_batch(snapshot: StoreSnapshot, spec: JobSpec) -> dict[tuple[str, Granularity], SummaryTable]:
    """Run every (metric, granularity) job over the decoupled series.

    Tables are built fresh on each call (replace, not append), so rerunning
    on the same snapshot is idempotent. Series order cannot matter: each
    series writes only its own keys.
    """
    series_by_name = decouple_rows(snapshot)
    gap_limit = 2 * snapshot.base_resolution
    tables: dict[tuple[str, Granularity], SummaryTable] = {}
    for metric in spec.metrics:
        for gran in spec.granularities:
            table = SummaryTable(metric=metric, granularity=gran)
            for name, series in series_by_name.items():
                if metric == "count":
                    point_id = parse_system_name(name).point_id
                    rule = next((r for r in spec.rules if r.matches(point_id)), None)
                    if rule is None:
                        continue
                    table.insert(summarize_count(series, rule, gran, gap_limit, point=name))
                else:
                    table.insert(_SUMMARIZERS[metric](series, gran, point=name))
            tables[(metric, gran)] = table
    return tables
