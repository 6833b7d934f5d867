"""Summary CSV export, 3D-nested-list construction, time selection, and the
mock FM-BIM element registry.

The export contract is the pivoted CSV: header of BASIDs, first column of
period timestamps newest-first, cells holding comma-joined point values in a
fixed point order (quoted, since cells embed commas). The mapping side
imports that CSV, reorders columns to the BIM element ordering, splits each
cell into floats (slot 0 stays the timestamp), selects one time row, and
writes the resulting point-by-element frame into element parameters.

Missing data is exported as a sentinel (555555 by default) rather than
nulls; the sentinel never exists inside the store or summary tables, only
in exports and parameter writes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .analytics import Granularity, SummaryTable
from .errors import MissingColumn, ShapeMismatch
from .names import parse_system_name

SENTINEL = 555555.0
CSV_TS_FORMAT = "%Y-%m-%d %H:%M:%S"


def summary_filename(metric: str, granularity: Granularity | str) -> str:
    gran = granularity.value if isinstance(granularity, Granularity) else granularity
    return f"summary_{metric}_{gran}.csv"


def _format_value(v: float) -> str:
    # integers render bare ("5", "555555"); everything else via repr, which
    # round-trips float() exactly
    if v == int(v):
        return str(int(v))
    return repr(v)


# -- registry ---------------------------------------------------------------

@dataclass
class BimElement:
    element_id: int
    bas_id: str
    room_id: str = ""
    parameters: dict[str, float] = field(default_factory=dict)


class Registry:
    """Ordered mock BIM element registry; element_id and bas_id are unique."""

    def __init__(self, elements: list[BimElement]):
        ids = [e.element_id for e in elements]
        bas = [e.bas_id for e in elements]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate element_id in registry")
        if len(set(bas)) != len(bas):
            raise ValueError("duplicate bas_id in registry")
        self.elements = elements
        self.by_id = {e.element_id: e for e in elements}

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def from_seed(cls, path: str | Path) -> "Registry":
        with open(path, encoding="utf-8") as f:
            seed = json.load(f)
        return cls([
            BimElement(
                element_id=int(item["element_id"]),
                bas_id=item["bas_id"],
                room_id=item.get("room_id", ""),
            )
            for item in seed
        ])

    def apply_spatial_table(self, table: dict[str, str]) -> None:
        """Fill room_id for equipment-hosted elements from a bas_id lookup."""
        for e in self.elements:
            if not e.room_id and e.bas_id in table:
                e.room_id = table[e.bas_id]


def load_spatial_table(path: str | Path) -> dict[str, str]:
    """CSV 'bas_id,room_id' with header row."""
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["bas_id", "room_id"]:
            raise ValueError(f"expected header 'bas_id,room_id' in {path}")
        return {row[0]: row[1] for row in reader if row}


def snapshot_model(registry: Registry) -> str:
    """Byte-stable JSON dump of the registry state."""
    doc = {
        "elements": [
            {
                "element_id": e.element_id,
                "bas_id": e.bas_id,
                "room_id": e.room_id,
                "parameters": {k: e.parameters[k] for k in sorted(e.parameters)},
            }
            for e in registry.elements
        ]
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# -- CSV export -------------------------------------------------------------

@dataclass
class SummaryCsv:
    columns: list[str]                  # BASIDs, in header order
    rows: list[tuple[str, list[str]]]   # (timestamp text, raw cell per column)


def emit_summary_csv(table: SummaryTable, point_order: list[str], out_dir: str | Path,
                     bas_ids: list[str] | None = None,
                     sentinel: float = SENTINEL) -> Path:
    """Write the pivoted summary to its fixed-name CSV and return the path.

    One file per (metric, granularity), rewritten in place on every batch
    run. Slots with no summary value hold the sentinel.
    """
    by_cell: dict[tuple[datetime, str, str], float] = {}
    bas_seen: list[str] = []
    for (period, full_name), value in table.values.items():
        name = parse_system_name(full_name)
        by_cell[(period, name.bas_id, name.point_id)] = value
        if name.bas_id not in bas_seen:
            bas_seen.append(name.bas_id)
    columns = bas_ids if bas_ids is not None else sorted(bas_seen)
    periods = sorted({period for period, _, _ in by_cell}, reverse=True)

    out_path = Path(out_dir) / summary_filename(table.metric, table.granularity)
    with open(out_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow([""] + columns)
        for period in periods:
            cells = []
            for bas in columns:
                vals = [
                    by_cell.get((period, bas, point), sentinel)
                    for point in point_order
                ]
                cells.append(", ".join(_format_value(v) for v in vals))
            writer.writerow([period.strftime(CSV_TS_FORMAT)] + cells)
    return out_path


def read_summary_csv(path: str | Path) -> SummaryCsv:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if not header:
            raise ValueError(f"empty summary CSV {path}")
        columns = header[1:]
        rows = [(row[0], row[1:]) for row in reader if row]
    return SummaryCsv(columns=columns, rows=rows)


# -- 3D list and time selection ---------------------------------------------

def build_3d(summary: SummaryCsv, bim_order: list[tuple[int, str]]) -> list:
    """Element-major, time-major nested list; slot 0 of each row is the
    timestamp, slots 1..P the parsed point values, columns reordered to the
    BIM element ordering."""
    col_index: dict[str, int] = {}
    for i, bas in enumerate(summary.columns):
        col_index.setdefault(bas, i)
    all_data = []
    for _element_id, bas_id in bim_order:
        if bas_id not in col_index:
            raise MissingColumn(f"BASID {bas_id!r} not in summary CSV")
        idx = col_index[bas_id]
        element_rows = []
        for ts_text, cells in summary.rows:
            values = [float(v.strip()) for v in cells[idx].split(",")]
            element_rows.append([ts_text] + values)
        all_data.append(element_rows)
    return all_data


def select_time(all_data: list, selected_time: int) -> list:
    """Pick one time row across all elements; output shape P x elements.

    This mirrors the slider selection block verbatim: out[k-1][j] takes
    slot k of element j at the selected row (slot 0, the timestamp, is
    skipped).
    """
    if not all_data:
        return []
    if not 0 <= selected_time < len(all_data[0]):
        raise IndexError(f"selected_time {selected_time} out of range")
    vals_to_map = [[] for _ in range(len(all_data[0][int(selected_time)]) - 1)]
    for j in range(len(all_data)):
        for k in range(1, len(all_data[0][int(selected_time)])):
            vals_to_map[k - 1].insert(j, all_data[j][int(selected_time)][k])
    return vals_to_map


# -- mapping into the registry ----------------------------------------------

@dataclass
class MapReport:
    written: int = 0
    skipped: list[tuple[int, str]] = field(default_factory=list)  # sentinel slots


def map_frame(frame: list, point_order: list[str], registry: Registry,
              sentinel: float = SENTINEL) -> MapReport:
    """Write one selected frame into element parameters.

    Sentinels are written as-is (the consumer cannot take nulls) but each
    occurrence is flagged in the report. A shape mismatch aborts before any
    write.
    """
    if len(frame) != len(point_order):
        raise ShapeMismatch(f"frame has {len(frame)} point rows, expected {len(point_order)}")
    for row in frame:
        if len(row) != len(registry.elements):
            raise ShapeMismatch(
                f"frame row has {len(row)} elements, registry has {len(registry.elements)}"
            )
    report = MapReport()
    for k, point_id in enumerate(point_order):
        for j, element in enumerate(registry.elements):
            value = frame[k][j]
            element.parameters[point_id] = value
            report.written += 1
            if value == sentinel:
                report.skipped.append((element.element_id, point_id))
    return report
