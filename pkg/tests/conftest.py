import pytest

from covbridge.ingest import IngestPipeline
from covbridge.journal import BackupJournal
from covbridge.names import LookupTable
from covbridge.store import TimeSeriesStore


def make_lookup(n_points: int = 5) -> LookupTable:
    pairs = [
        (f"DCCNAE-01/FC-1.CAV-1-{i}.T", f"DCC.RM.DCC01-{i:02d}.T")
        for i in range(1, n_points + 1)
    ]
    return LookupTable.from_pairs(pairs)


def wire_line(i: int, second: int = 0, value: float = 20.0) -> str:
    from datetime import datetime, timedelta, timezone

    ts = datetime(2020, 1, 27, 11, 54, 0, tzinfo=timezone(timedelta(hours=-5)))
    ts += timedelta(seconds=second)
    return (
        f"{ts.strftime('%Y-%m-%dT%H:%M:%S%z')},"
        f"DCCNAE-01,DCCNAE-01/FC-1.CAV-1-{i}.T,{value}"
    )


AHU_ELEMENTS = [(38526, "AHU1", "RM-101"), (31429, "AHU2", "RM-102"), (43512, "AHU3", "RM-103")]
AHU_POINT_ORDER = ["SAH", "SAT"]
AHU_ROWS = [
    ("2019-05-24 17:00:00", {"AHU1": "0.23, 22.3", "AHU2": "0.7, 22.0", "AHU3": "555555, 555555"}),
    ("2019-05-24 16:00:00", {"AHU1": "0.5, 23.3", "AHU2": "0.8, 25.5", "AHU3": "555555, 555555"}),
    ("2019-05-24 15:00:00", {"AHU1": "0.22, 23.8", "AHU2": "1.1, 22.0", "AHU3": "555555, 555555"}),
]


def write_ahu_fixture(data_dir):
    """Summary CSV + registry + point order for a three-AHU sample deployment."""
    import csv as csv_mod
    import json

    data_dir.mkdir(parents=True, exist_ok=True)
    with open(data_dir / "summary_avg_hourly.csv", "w", newline="") as f:
        writer = csv_mod.writer(f)
        writer.writerow(["", "AHU1", "AHU2", "AHU3"])
        for ts, cells in AHU_ROWS:
            writer.writerow([ts, cells["AHU1"], cells["AHU2"], cells["AHU3"]])
    with open(data_dir / "registry.json", "w") as f:
        json.dump(
            [{"element_id": eid, "bas_id": bas, "room_id": room}
             for eid, bas, room in AHU_ELEMENTS], f)
    with open(data_dir / "point_order.json", "w") as f:
        json.dump(AHU_POINT_ORDER, f)
    return data_dir


@pytest.fixture
def pipeline(tmp_path):
    return IngestPipeline(
        lookup=make_lookup(),
        store=TimeSeriesStore(base_resolution=5),
        journal=BackupJournal(tmp_path / "backup.journal"),
        quarantine_path=tmp_path / "quarantine.log",
    )
