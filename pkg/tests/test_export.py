import csv
import random
from datetime import datetime, timedelta, timezone

import pytest

from covbridge.analytics import Granularity, JobSpec, run_batch, SummaryTable
from covbridge.errors import MissingColumn, ShapeMismatch
from covbridge.export import (
    SENTINEL,
    BimElement,
    Registry,
    build_3d,
    emit_summary_csv,
    load_spatial_table,
    map_frame,
    read_summary_csv,
    select_time,
    snapshot_model,
    summary_filename,
)
from covbridge.names import parse_system_name
from covbridge.store import TimeSeriesStore
from conftest import AHU_ELEMENTS, AHU_POINT_ORDER, write_ahu_fixture

UTC = timezone.utc


def table_from(records, metric="avg", granularity=Granularity.HOURLY):
    table = SummaryTable(metric=metric, granularity=granularity)
    table.values = {
        (period, point): value for period, point, value in records
    }
    return table


T17 = datetime(2019, 4, 24, 17, 0, tzinfo=UTC)
T16 = datetime(2019, 4, 24, 16, 0, tzinfo=UTC)


class TestEmitSummaryCsv:
    def sample_table(self):
        return table_from([
            (T17, "DCC.RM.BASID1.OCC", 0.23), (T17, "DCC.RM.BASID1.T", 22.3),
            (T17, "DCC.RM.BASID1.Q", 5.0),
            (T17, "DCC.RM.BASID2.OCC", 0.20), (T17, "DCC.RM.BASID2.T", 24.3),
            (T17, "DCC.RM.BASID2.Q", 1.0),
            (T16, "DCC.RM.BASID1.OCC", 0.22), (T16, "DCC.RM.BASID1.T", 22.3),
            (T16, "DCC.RM.BASID1.Q", 0.0),
            (T16, "DCC.RM.BASID2.OCC", 0.23), (T16, "DCC.RM.BASID2.T", 24.2),
            (T16, "DCC.RM.BASID2.Q", 1.0),
        ])

    def test_pivoted_shape(self, tmp_path):
        path = emit_summary_csv(self.sample_table(), ["OCC", "T", "Q"], tmp_path)
        assert path.name == "summary_avg_hourly.csv"
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["", "BASID1", "BASID2"]
        assert rows[1] == ["2019-04-24 17:00:00", "0.23, 22.3, 5", "0.2, 24.3, 1"]
        assert rows[2] == ["2019-04-24 16:00:00", "0.22, 22.3, 0", "0.23, 24.2, 1"]

    def test_rows_newest_first(self, tmp_path):
        path = emit_summary_csv(self.sample_table(), ["OCC"], tmp_path)
        summary = read_summary_csv(path)
        stamps = [ts for ts, _ in summary.rows]
        assert stamps == sorted(stamps, reverse=True)

    def test_empty_table_emits_header_only(self, tmp_path):
        table = table_from([], metric="min", granularity=Granularity.DAILY)
        path = emit_summary_csv(table, ["T"], tmp_path, bas_ids=["BASID1"])
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        assert rows == [["", "BASID1"]]
        assert path.name == summary_filename("min", "daily")

    def test_missing_point_renders_sentinel(self, tmp_path):
        table = table_from([
            (T17, "DCC.RM.BASID1.OCC", 0.23),
            # T missing for BASID1 at 17:00
        ])
        path = emit_summary_csv(table, ["OCC", "T"], tmp_path)
        summary = read_summary_csv(path)
        assert summary.rows[0][1][0] == "0.23, 555555"

    def test_cells_are_rfc4180_quoted(self, tmp_path):
        path = emit_summary_csv(self.sample_table(), ["OCC", "T", "Q"], tmp_path)
        raw = path.read_text()
        assert '"0.23, 22.3, 5"' in raw


AHU_BIM_ORDER = [(eid, bas) for eid, bas, _ in AHU_ELEMENTS]


class TestBuild3d:
    def ahu_summary(self, tmp_path):
        write_ahu_fixture(tmp_path)
        return read_summary_csv(tmp_path / "summary_avg_hourly.csv")

    def test_ahu_columns(self, tmp_path):
        all_data = build_3d(self.ahu_summary(tmp_path), AHU_BIM_ORDER)
        assert len(all_data) == 3  # elements
        assert len(all_data[0]) == 3  # time rows
        ahu1 = all_data[0]
        assert [row[1] for row in ahu1] == [0.23, 0.5, 0.22]   # SAH, newest first
        assert [row[2] for row in ahu1] == [22.3, 23.3, 23.8]  # SAT
        assert ahu1[0][0] == "2019-05-24 17:00:00"

    def test_single_cell_shape(self):
        from covbridge.export import SummaryCsv

        summary = SummaryCsv(columns=["B1"], rows=[("2019-01-01 00:00:00", ["1.5"])])
        all_data = build_3d(summary, [(1, "B1")])
        assert all_data == [[["2019-01-01 00:00:00", 1.5]]]

    def test_column_order_comes_from_bim(self, tmp_path):
        summary = self.ahu_summary(tmp_path)
        permuted_cols = list(reversed(summary.columns))
        from covbridge.export import SummaryCsv

        col_idx = {c: i for i, c in enumerate(summary.columns)}
        permuted = SummaryCsv(
            columns=permuted_cols,
            rows=[(ts, [cells[col_idx[c]] for c in permuted_cols]) for ts, cells in summary.rows],
        )
        assert build_3d(summary, AHU_BIM_ORDER) == build_3d(permuted, AHU_BIM_ORDER)

    def test_missing_column(self, tmp_path):
        with pytest.raises(MissingColumn):
            build_3d(self.ahu_summary(tmp_path), [(99, "AHU9")])


class TestSelectTime:
    def ahu_data(self, tmp_path):
        write_ahu_fixture(tmp_path)
        return build_3d(read_summary_csv(tmp_path / "summary_avg_hourly.csv"), AHU_BIM_ORDER)

    def test_offset_1_selects_second_newest_row(self, tmp_path):
        frame = select_time(self.ahu_data(tmp_path), 1)
        assert frame[0][0] == 0.5    # AHU1.SAH
        assert frame[1][0] == 23.3   # AHU1.SAT
        assert frame[0][1] == 0.8    # AHU2.SAH

    def test_offset_0_is_newest(self, tmp_path):
        frame = select_time(self.ahu_data(tmp_path), 0)
        assert (frame[0][0], frame[1][0], frame[0][1]) == (0.23, 22.3, 0.7)

    def test_shape_is_points_by_elements(self, tmp_path):
        frame = select_time(self.ahu_data(tmp_path), 2)
        assert len(frame) == 2
        assert all(len(row) == 3 for row in frame)

    def test_single_element_single_point(self):
        all_data = [[["t0", 7.5]]]
        assert select_time(all_data, 0) == [[7.5]]

    def test_out_of_range(self, tmp_path):
        with pytest.raises(IndexError):
            select_time(self.ahu_data(tmp_path), 99)
        with pytest.raises(IndexError):
            select_time(self.ahu_data(tmp_path), -1)

    def test_selection_law_and_transpose(self, tmp_path):
        all_data = self.ahu_data(tmp_path)
        stacked = [select_time(all_data, t) for t in range(len(all_data[0]))]
        for j in range(len(all_data)):
            for t in range(len(all_data[0])):
                for k in range(1, len(all_data[0][t])):
                    assert stacked[t][k - 1][j] == all_data[j][t][k]


class TestMapFrame:
    def registry(self):
        return Registry([
            BimElement(eid, bas, room) for eid, bas, room in AHU_ELEMENTS
        ])

    def test_ahu_frame_mapping(self, tmp_path):
        write_ahu_fixture(tmp_path)
        summary = read_summary_csv(tmp_path / "summary_avg_hourly.csv")
        registry = self.registry()
        frame = select_time(build_3d(summary, AHU_BIM_ORDER), 1)
        report = map_frame(frame, AHU_POINT_ORDER, registry)
        assert registry.by_id[38526].parameters == {"SAH": 0.5, "SAT": 23.3}
        assert registry.by_id[31429].parameters["SAH"] == 0.8
        assert report.written == 6
        assert set(report.skipped) == {(43512, "SAH"), (43512, "SAT")}

    def test_empty_registry(self):
        report = map_frame([], [], Registry([]))
        assert (report.written, report.skipped) == (0, [])

    def test_shape_mismatch_aborts_without_writes(self):
        registry = self.registry()
        with pytest.raises(ShapeMismatch):
            map_frame([[1.0]], AHU_POINT_ORDER, registry)
        assert all(not e.parameters for e in registry.elements)

    def test_idempotent(self):
        registry = self.registry()
        frame = [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]
        map_frame(frame, AHU_POINT_ORDER, registry)
        first = snapshot_model(registry)
        map_frame(frame, AHU_POINT_ORDER, registry)
        assert snapshot_model(registry) == first


class TestRegistry:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError):
            Registry([BimElement(1, "A"), BimElement(1, "B")])
        with pytest.raises(ValueError):
            Registry([BimElement(1, "A"), BimElement(2, "A")])

    def test_spatial_table(self, tmp_path):
        path = tmp_path / "spatial.csv"
        path.write_text("bas_id,room_id\nAHU1,RM-900\n")
        registry = Registry([BimElement(1, "AHU1")])
        registry.apply_spatial_table(load_spatial_table(path))
        assert registry.elements[0].room_id == "RM-900"

    def test_snapshot_empty(self):
        assert snapshot_model(Registry([])) == '{"elements":[]}'

    def test_snapshot_byte_stable(self):
        registry = Registry([BimElement(38526, "AHU1", "R", {"SAT": 23.3})])
        assert snapshot_model(registry) == snapshot_model(registry)
        assert '"SAT":23.3' in snapshot_model(registry)


class TestRoundTrip:
    def test_emit_build_select_recovers_values(self, tmp_path):
        # every non-sentinel summary value survives the full export/map cycle
        rng = random.Random(12)
        points = ["OCC", "T"]
        bas_ids = ["FCU-1-11", "FCU-1-13"]
        periods = [datetime(2019, 5, 1, h, 0, tzinfo=UTC) for h in range(6)]
        records = []
        for period in periods:
            for bas in bas_ids:
                for point in points:
                    if rng.random() < 0.8:  # leave gaps
                        records.append((period, f"DCC.RM.{bas}.{point}", round(rng.uniform(0, 30), 6)))
        table = table_from(records)
        path = emit_summary_csv(table, points, tmp_path, bas_ids=bas_ids)
        summary = read_summary_csv(path)
        bim_order = [(i, bas) for i, bas in enumerate(bas_ids)]
        all_data = build_3d(summary, bim_order)
        by_cell = {(p, parse_system_name(n).bas_id, parse_system_name(n).point_id): v
                   for (p, n), v in table.values.items()}
        rows_newest_first = sorted(periods, reverse=True)
        for t, period in enumerate(rows_newest_first):
            frame = select_time(all_data, t)
            for k, point in enumerate(points):
                for j, bas in enumerate(bas_ids):
                    expected = by_cell.get((period, bas, point), SENTINEL)
                    assert frame[k][j] == expected
