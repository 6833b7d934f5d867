"""covbridge: BAS change-of-value telemetry pipeline.

Ingests change-of-value sensor events over a line-oriented TCP protocol,
stores them month-partitioned, summarizes them in batch jobs, and maps
summary frames onto a mock FM-BIM element registry for time-slider
navigation.
"""

from .names import (
    LookupTable,
    NetworkPointName,
    PointName,
    format_name,
    parse_network_name,
    parse_system_name,
)
from .events import CovEvent, compute_doc_id, parse_cov_line, with_doc_id
from .store import TimeSeriesStore, StoreSnapshot, decouple_rows
from .journal import BackupJournal
from .ingest import IngestPipeline, IngestResult, ReplayReport

__all__ = [
    "BackupJournal",
    "CovEvent",
    "IngestPipeline",
    "IngestResult",
    "LookupTable",
    "NetworkPointName",
    "PointName",
    "ReplayReport",
    "StoreSnapshot",
    "TimeSeriesStore",
    "compute_doc_id",
    "decouple_rows",
    "format_name",
    "parse_cov_line",
    "parse_network_name",
    "parse_system_name",
    "with_doc_id",
]
