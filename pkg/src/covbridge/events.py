"""Change-of-value wire events and their content-hash document IDs.

Wire format, one event per line:

    2020-01-27T11:54:25-0500,DCCNCE-20,DCCNCE-20/FCB.BTU-20-01.AV10,612385

The document ID is the MD5 of the canonical line. The timestamp and value
substrings are kept exactly as received so the hash is stable across
parse/format cycles.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from datetime import datetime

from .errors import BadTimestamp, BadValue, MalformedLine
from .names import NetworkPointName, parse_network_name

WIRE_TS_FORMAT = "%Y-%m-%dT%H:%M:%S%z"
_WIRE_TS_RE = re.compile(r"\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}[+-]\d{4}$")
_VALUE_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class CovEvent:
    timestamp: datetime
    device_id: str
    network_point: NetworkPointName
    value: float
    timestamp_text: str
    value_text: str
    doc_id: str = field(default="", compare=False)

    def canonical_line(self) -> str:
        return (
            f"{self.timestamp_text},{self.device_id},"
            f"{self.network_point.canonical()},{self.value_text}"
        )


def parse_cov_line(line: str) -> CovEvent:
    """Split a stripped wire line into the 4-field event tuple.

    doc_id is left empty; call compute_doc_id / with_doc_id afterwards.
    """
    fields = [f.strip() for f in line.strip().split(",")]
    if len(fields) != 4:
        raise MalformedLine(f"expected 4 comma-separated fields, got {len(fields)}")
    ts_text, device_id, net_text, value_text = fields
    if not _WIRE_TS_RE.match(ts_text):
        raise BadTimestamp(f"timestamp {ts_text!r} not YYYY-MM-DDThh:mm:ss+/-hhmm")
    try:
        timestamp = datetime.strptime(ts_text, WIRE_TS_FORMAT)
    except ValueError as exc:
        raise BadTimestamp(f"timestamp {ts_text!r}: {exc}") from None
    if not _VALUE_RE.match(value_text):
        raise BadValue(f"value {value_text!r} is not a decimal number")
    value = float(value_text)
    network_point = parse_network_name(net_text)
    return CovEvent(
        timestamp=timestamp,
        device_id=device_id,
        network_point=network_point,
        value=value,
        timestamp_text=ts_text,
        value_text=value_text,
    )


def compute_doc_id(event: CovEvent) -> str:
    """MD5 of the canonical line, lowercase hex; the store's dedup key.

    MD5 is deliberate: it is only a uniqueness key, never a security boundary.
    """
    return hashlib.md5(event.canonical_line().encode("utf-8")).hexdigest()


def with_doc_id(event: CovEvent) -> CovEvent:
    return CovEvent(
        timestamp=event.timestamp,
        device_id=event.device_id,
        network_point=event.network_point,
        value=event.value,
        timestamp_text=event.timestamp_text,
        value_text=event.value_text,
        doc_id=compute_doc_id(event),
    )
