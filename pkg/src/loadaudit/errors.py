"""Exception types raised by the loadaudit pipeline."""

from __future__ import annotations


class LoadAuditError(Exception):
    """Base class for all loadaudit errors."""


class MalformedRow(LoadAuditError):
    """A meter CSV row could not be parsed."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class DuplicateTimestamp(LoadAuditError):
    """Two samples for one load share the same instant."""

    def __init__(self, load_id: str, timestamp):
        super().__init__(f"duplicate timestamp {timestamp} for load {load_id!r}")
        self.load_id = load_id
        self.timestamp = timestamp


class EmptyInput(LoadAuditError):
    """The meter CSV contained no data rows."""


class DuplicateLoadId(LoadAuditError):
    """Two configured loads share a load_id."""


class MissingField(LoadAuditError):
    """A required config field is absent."""

    def __init__(self, name: str):
        super().__init__(f"missing required field {name!r}")
        self.name = name


class InvalidBand(LoadAuditError):
    """Tolerance band lower bound exceeds its upper bound."""


class UnknownLoad(LoadAuditError):
    """A load_id has no matching configuration entry."""

    def __init__(self, load_id: str):
        super().__init__(f"no configured load with id {load_id!r}")
        self.load_id = load_id


class UnresolvedThreshold(LoadAuditError):
    """A fractional ON threshold cannot be resolved without a rated power."""


class OutOfRange(LoadAuditError):
    """An integration interval extends beyond the sampled time span."""


class EmptyCycleList(LoadAuditError):
    """An operation that needs at least one cycle received none."""


class ZeroCycles(LoadAuditError):
    """Classification was attempted on a load with no cycles."""


class InfeasibleProfile(LoadAuditError):
    """A synthetic profile cannot produce well-separated cycles."""


class NoMatchingLoads(LoadAuditError):
    """No supplied meter series matches any configured load."""
