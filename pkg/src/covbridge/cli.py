"""Command-line entry points tying the pipeline together."""

from __future__ import annotations

import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from .analytics import JobSpec, run_batch
from .errors import CovBridgeError
from .export import (
    Registry,
    emit_summary_csv,
    map_frame,
    read_summary_csv,
    build_3d,
    select_time,
    snapshot_model,
)
from .ingest import IngestPipeline
from .journal import BackupJournal
from .names import LookupTable, parse_network_name
from .sim import Scenario, stream
from .store import TimeSeriesStore
from . import server as server_mod


def _parse_bind(text: str) -> tuple[str, int]:
    host, _, port = text.rpartition(":")
    return host or "127.0.0.1", int(port)


@click.group()
@click.option("-v", "--verbose", is_flag=True)
def main(verbose: bool):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO)


# -- point naming ------------------------------------------------------------

@main.group()
def points():
    """Lookup table and point name utilities."""


@points.command("lint")
@click.argument("csv_file", type=click.Path(exists=True))
def points_lint(csv_file: str):
    """Validate every row of a lookup table CSV."""
    try:
        table = LookupTable.from_csv(csv_file)
    except (CovBridgeError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"ok: {len(table)} entries")


@points.command("resolve")
@click.argument("network_id")
@click.option("--lookup", "lookup_csv", required=True, type=click.Path(exists=True))
def points_resolve(network_id: str, lookup_csv: str):
    """Resolve a network-context point ID to its system-context name."""
    table = LookupTable.from_csv(lookup_csv)
    try:
        click.echo(table.resolve(parse_network_name(network_id)).canonical())
    except CovBridgeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


# -- ingest ------------------------------------------------------------------

@main.command()
@click.option("--bind", default="127.0.0.1:4710", show_default=True)
@click.option("--journal", "journal_path", envvar="COVBRIDGE_JOURNAL",
              default="backup.journal", show_default=True)
@click.option("--lookup", "lookup_csv", required=True, type=click.Path(exists=True))
@click.option("--store-log", default="store.log", show_default=True)
@click.option("--quarantine", default="quarantine.log", show_default=True)
@click.option("--persistent", is_flag=True, help="Accept many newline-delimited events per connection.")
def serve(bind, journal_path, lookup_csv, store_log, quarantine, persistent):
    """Run the change-of-value TCP ingest server until interrupted."""
    pipeline = IngestPipeline(
        lookup=LookupTable.from_csv(lookup_csv),
        store=TimeSeriesStore(log_path=store_log),
        journal=BackupJournal(journal_path),
        quarantine_path=Path(quarantine),
    )
    server_mod.serve(_parse_bind(bind), pipeline, persistent=persistent)


@main.command()
@click.option("--journal", "journal_path", envvar="COVBRIDGE_JOURNAL", required=True)
@click.option("--lookup", "lookup_csv", required=True, type=click.Path(exists=True))
@click.option("--store-log", default="store.log", show_default=True)
def replay(journal_path, lookup_csv, store_log):
    """Replay the backup journal into the store."""
    pipeline = IngestPipeline(
        lookup=LookupTable.from_csv(lookup_csv),
        store=TimeSeriesStore(log_path=store_log),
        journal=BackupJournal(journal_path),
    )
    report = pipeline.replay_backup()
    click.echo(f"replayed={report.replayed} deduped={report.deduped} remaining={report.remaining}")


@main.command()
@click.option("--scenario", "scenario_file", required=True, type=click.Path(exists=True))
@click.option("--sink", required=True, help="host:port of the ingest server")
def simulate(scenario_file, sink):
    """Stream a simulated sensor scenario to an ingest server."""
    scenario = Scenario.from_json(scenario_file)
    report = stream(scenario, _parse_bind(sink))
    click.echo(
        f"emitted={len(report.emissions)} sent={len(report.sent)} "
        f"acked={report.acked} duplicates={report.duplicates} unsent={len(report.unsent)}"
    )


# -- batch and export --------------------------------------------------------

@main.command()
@click.option("--spec", "spec_file", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--store-log", required=True, type=click.Path(exists=True))
def batch(spec_file, out_dir, store_log):
    """Run summarization jobs over the store and emit summary CSVs.

    The job spec JSON may carry "point_order" (required for CSV emission)
    and optional "bas_ids" for fixed column ordering.
    """
    spec = JobSpec.from_json(spec_file)
    with open(spec_file, encoding="utf-8") as f:
        raw = json.load(f)
    point_order = raw.get("point_order")
    if not point_order:
        click.echo("error: spec needs a point_order list for CSV emission", err=True)
        sys.exit(1)
    store = TimeSeriesStore(log_path=store_log)
    tables = run_batch(store.snapshot(), spec)
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    for table in tables.values():
        path = emit_summary_csv(table, point_order, out_dir, bas_ids=raw.get("bas_ids"))
        click.echo(f"wrote {path}")


@main.command()
@click.option("--metric", required=True)
@click.option("--granularity", required=True)
@click.option("--spec", "spec_file", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", default=".", show_default=True)
@click.option("--store-log", required=True, type=click.Path(exists=True))
@click.pass_context
def export(ctx, metric, granularity, spec_file, out_dir, store_log):
    """Emit a single summary CSV for one (metric, granularity)."""
    with open(spec_file, encoding="utf-8") as f:
        raw = json.load(f)
    raw["metrics"] = [metric]
    raw["granularities"] = [granularity]
    tmp = Path(out_dir) / ".export_spec.json"
    tmp.write_text(json.dumps(raw), encoding="utf-8")
    try:
        ctx.invoke(batch, spec_file=str(tmp), out_dir=out_dir, store_log=store_log)
    finally:
        tmp.unlink(missing_ok=True)


@main.group()
def store():
    """Time-series store utilities."""


@store.command("dump")
@click.option("--point", required=True, help="full system-context point name")
@click.option("--from", "start_text", required=True, help="ISO timestamp, inclusive")
@click.option("--to", "end_text", required=True, help="ISO timestamp, exclusive")
@click.option("--store-log", required=True, type=click.Path(exists=True))
def store_dump(point, start_text, end_text, store_log):
    from .names import parse_system_name

    name = parse_system_name(point)
    ts_store = TimeSeriesStore(log_path=store_log)
    start = datetime.fromisoformat(start_text).replace(tzinfo=timezone.utc)
    end = datetime.fromisoformat(end_text).replace(tzinfo=timezone.utc)
    for ts, value in ts_store.query_range(name.bas_id, name.point_id, start, end):
        click.echo(f"{ts.isoformat()},{value}")


# -- mapping and API ---------------------------------------------------------

@main.command("map")
@click.option("--csv", "csv_file", required=True, type=click.Path(exists=True))
@click.option("--time", "time_offset", default=0, show_default=True)
@click.option("--registry", "registry_seed", required=True, type=click.Path(exists=True))
@click.option("--point-order", "point_order_file", required=True, type=click.Path(exists=True))
def map_cmd(csv_file, time_offset, registry_seed, point_order_file):
    """Select one time row from a summary CSV and map it onto the registry."""
    registry = Registry.from_seed(registry_seed)
    with open(point_order_file, encoding="utf-8") as f:
        point_order = json.load(f)
    summary = read_summary_csv(csv_file)
    bim_order = [(e.element_id, e.bas_id) for e in registry.elements]
    frame = select_time(build_3d(summary, bim_order), time_offset)
    report = map_frame(frame, point_order, registry)
    click.echo(f"written={report.written} sentinels={len(report.skipped)}")
    click.echo(snapshot_model(registry))


@main.command("serve-api")
@click.option("--port", default=8000, show_default=True)
@click.option("--data", "data_dir", required=True, type=click.Path(exists=True))
def serve_api(port, data_dir):
    """Serve the gateway HTTP API over the given data directory."""
    import uvicorn

    from .api import create_app

    uvicorn.run(create_app(data_dir), host="127.0.0.1", port=port)


if __name__ == "__main__":
    main()
