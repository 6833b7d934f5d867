"""Point naming conventions and the network-to-system lookup table.

Two identities exist for every BAS point:

* system context: ``BuildingID.SysID.BASID.PointID`` (four dot-separated
  segments, e.g. ``DCC.RM.DCC01-13.CLGUNOCC-SP``). Room-hosted points use
  SysID ``RM`` with the room number as BASID.
* network context: ``DeviceID/TrunkID.FieldControllerID.PointType``
  (e.g. ``DCCNAE-01/FC-1.CAV-1-10.CLGUNOCC-SP``). The controller segment may
  itself contain dots and spaces, so the remainder after the device is split
  at the first and last dot only.

A CSV lookup table bridges the two.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import MalformedName, UnknownPoint


@dataclass(frozen=True)
class PointName:
    """System-context identity: building, system, equipment/room, point."""

    building_id: str
    sys_id: str
    bas_id: str
    point_id: str

    def __post_init__(self):
        for field_name in ("building_id", "sys_id", "bas_id", "point_id"):
            seg = getattr(self, field_name)
            if not seg:
                raise MalformedName(f"empty segment {field_name}")
            if "." in seg:
                raise MalformedName(f"segment {field_name} contains '.': {seg!r}")

    def canonical(self) -> str:
        return f"{self.building_id}.{self.sys_id}.{self.bas_id}.{self.point_id}"

    def __str__(self) -> str:
        return self.canonical()


@dataclass(frozen=True)
class NetworkPointName:
    """Network-context identity rooted at an NAE device.

    field_controller_id may contain dots and spaces (BACnet IP trunks name
    controllers freely); trunk and point type may not.
    """

    device_id: str
    trunk_id: str
    field_controller_id: str
    point_type: str

    def __post_init__(self):
        if not self.device_id or "/" in self.device_id:
            raise MalformedName(f"bad device_id {self.device_id!r}")
        for field_name in ("trunk_id", "point_type"):
            seg = getattr(self, field_name)
            if not seg or "." in seg:
                raise MalformedName(f"bad {field_name}: {seg!r}")
        if not self.field_controller_id:
            raise MalformedName("empty field_controller_id")

    def canonical(self) -> str:
        return (
            f"{self.device_id}/{self.trunk_id}."
            f"{self.field_controller_id}.{self.point_type}"
        )

    def __str__(self) -> str:
        return self.canonical()


def parse_system_name(text: str) -> PointName:
    """Parse ``BuildingID.SysID.BASID.PointID``; exactly four segments."""
    parts = text.split(".")
    if len(parts) != 4:
        raise MalformedName(f"expected 4 dot-separated segments, got {len(parts)}: {text!r}")
    if any(not p for p in parts):
        raise MalformedName(f"empty segment in {text!r}")
    return PointName(*parts)


def parse_network_name(text: str) -> NetworkPointName:
    """Parse ``DeviceID/TrunkID.FieldControllerID.PointType``.

    The device is everything before the first '/'. In the remainder the
    trunk is the text before the first '.', the point type the text after the
    last '.', and the controller everything in between (dots allowed).
    """
    if "/" not in text:
        raise MalformedName(f"missing '/' in {text!r}")
    device_id, rest = text.split("/", 1)
    if not device_id:
        raise MalformedName(f"empty device id in {text!r}")
    if rest.count(".") < 2:
        raise MalformedName(f"need at least 2 '.' after device in {text!r}")
    trunk_id, rest = rest.split(".", 1)
    field_controller_id, point_type = rest.rsplit(".", 1)
    if not trunk_id or not field_controller_id or not point_type:
        raise MalformedName(f"empty segment in {text!r}")
    return NetworkPointName(device_id, trunk_id, field_controller_id, point_type)


def format_name(name: PointName | NetworkPointName) -> str:
    """Canonical text form; inverse of the matching parser."""
    return name.canonical()


class LookupTable:
    """Immutable map from canonical network names to system point names."""

    def __init__(self, entries: dict[str, PointName]):
        self._entries = dict(entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def resolve(self, net: NetworkPointName) -> PointName:
        key = net.canonical()
        try:
            return self._entries[key]
        except KeyError:
            raise UnknownPoint(key) from None

    @classmethod
    def from_pairs(cls, pairs) -> "LookupTable":
        entries: dict[str, PointName] = {}
        for net_text, sys_text in pairs:
            key = parse_network_name(net_text).canonical()
            if key in entries:
                raise ValueError(f"duplicate lookup key {key!r}")
            entries[key] = parse_system_name(sys_text)
        return cls(entries)

    @classmethod
    def from_csv(cls, path: str | Path) -> "LookupTable":
        """Load a two-column CSV with header ``network,system``."""
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["network", "system"]:
                raise ValueError(f"expected header 'network,system' in {path}")
            rows = [(row[0], row[1]) for row in reader if row]
        return cls.from_pairs(rows)


def resolve(table: LookupTable, net: NetworkPointName) -> PointName:
    return table.resolve(net)
