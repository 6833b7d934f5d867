"""Exception types shared across the pipeline."""


class CovBridgeError(Exception):
    """Base class for all covbridge errors."""


class MalformedName(CovBridgeError):
    """A point identifier does not match its grammar."""


class UnknownPoint(CovBridgeError):
    """A network point has no entry in the lookup table (un-inventoried)."""


class MalformedLine(CovBridgeError):
    """A wire line does not split into the expected four fields."""


class BadTimestamp(CovBridgeError):
    """Timestamp field does not match the wire format."""


class BadValue(CovBridgeError):
    """Value field is not a decimal number."""


class StoreUnavailable(CovBridgeError):
    """The store rejected a write because it is (simulated or actually) down."""


class BackupWriteFailure(CovBridgeError):
    """The journal itself could not be written; fatal for the connection."""


class CapExceeded(CovBridgeError):
    """A partition would exceed its configured cell cap."""


class MissingColumn(CovBridgeError):
    """A BIM element's BASID has no column in the summary CSV."""


class ShapeMismatch(CovBridgeError):
    """A frame does not match the registry's points x elements shape."""
