"""HTTP facade serving summarized frames to the slider UI.

Read-only: every endpoint loads from the data directory (summary CSVs,
registry seed, point order) on request, so the on-disk CSV contract stays
the source of truth and batch runs are picked up without restarts.

Data directory layout:

    registry.json       [{element_id, bas_id, room_id}]
    point_order.json    ["SAH", "SAT", ...]
    summary_<metric>_<granularity>.csv
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse

from .export import (
    SENTINEL,
    Registry,
    build_3d,
    read_summary_csv,
    select_time,
    summary_filename,
)

_SUMMARY_FILE_RE = re.compile(r"summary_(?P<metric>[a-z]+)_(?P<granularity>[a-z]+)\.csv$")


def create_app(data_dir: str | Path, sentinel: float = SENTINEL) -> FastAPI:
    data_dir = Path(data_dir)
    app = FastAPI(title="covbridge gateway")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    def load_registry() -> Registry:
        return Registry.from_seed(data_dir / "registry.json")

    def load_point_order() -> list[str]:
        with open(data_dir / "point_order.json", encoding="utf-8") as f:
            return json.load(f)

    @app.get("/health", response_class=PlainTextResponse)
    def health() -> str:
        return "ok"

    @app.get("/elements")
    def elements():
        return [
            {"element_id": e.element_id, "bas_id": e.bas_id, "room_id": e.room_id}
            for e in load_registry().elements
        ]

    @app.get("/summaries")
    def summaries():
        catalog = []
        for path in sorted(data_dir.glob("summary_*.csv")):
            m = _SUMMARY_FILE_RE.match(path.name)
            if not m:
                continue
            rows = len(read_summary_csv(path).rows)
            catalog.append(
                {"metric": m["metric"], "granularity": m["granularity"], "rows": rows}
            )
        return catalog

    @app.get("/frame")
    def frame(metric: str, granularity: str, offset: int = 0):
        path = data_dir / summary_filename(metric, granularity)
        if not path.exists():
            raise HTTPException(404, f"no summary for {metric}/{granularity}")
        summary = read_summary_csv(path)
        if not 0 <= offset < len(summary.rows):
            raise HTTPException(416, f"offset {offset} out of range 0..{len(summary.rows) - 1}")
        registry = load_registry()
        point_order = load_point_order()
        bim_order = [(e.element_id, e.bas_id) for e in registry.elements]
        all_data = build_3d(summary, bim_order)
        selected = select_time(all_data, offset)
        entries = []
        for k, point_id in enumerate(point_order):
            for j, element in enumerate(registry.elements):
                value = selected[k][j]
                entries.append({
                    "element_id": element.element_id,
                    "bas_id": element.bas_id,
                    "room_id": element.room_id,
                    "point_id": point_id,
                    "value": value,
                    "is_sentinel": value == sentinel,
                })
        return {
            "metric": metric,
            "granularity": granularity,
            "offset": offset,
            "period_start": summary.rows[offset][0],
            "entries": entries,
        }

    return app
