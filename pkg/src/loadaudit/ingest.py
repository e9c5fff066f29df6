"""Meter CSV ingestion and per-load validation.

Meter data arrives as long-format CSV with the header
``load_id,timestamp,power_kw``. Timestamps must be ISO-8601 with an
explicit UTC offset; power is instantaneous demand in kilowatts.
Internally a series stores epoch seconds (float64) and kilowatts in
parallel numpy arrays, which keeps segmentation and integration cheap
on multi-month meter dumps.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import IO, Iterable, Iterator

import numpy as np

from .errors import (
    DuplicateTimestamp,
    EmptyInput,
    InvalidBand,
    MalformedRow,
    UnknownLoad,
)

CSV_HEADER = ("load_id", "timestamp", "power_kw")


def parse_timestamp(text: str) -> float:
    """Parse an ISO-8601 timestamp with offset into epoch seconds (UTC).

    Naive timestamps (no offset) are rejected: local-time meter exports
    are ambiguous around DST transitions.
    """
    raw = text.strip()
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise ValueError(f"bad timestamp {text!r}: {exc}") from None
    if dt.tzinfo is None:
        raise ValueError(f"timestamp {text!r} has no UTC offset")
    return dt.timestamp()


def format_timestamp(epoch_s: float) -> str:
    """Render epoch seconds as ISO-8601 UTC (microsecond resolution)."""
    return datetime.fromtimestamp(epoch_s, tz=timezone.utc).isoformat()


def to_datetime(epoch_s: float) -> datetime:
    return datetime.fromtimestamp(epoch_s, tz=timezone.utc)


@dataclass(frozen=True)
class MeterSample:
    """One timestamped power reading."""

    timestamp: datetime
    power_kw: float


@dataclass(frozen=True, eq=False)
class MeterSeries:
    """All samples for one load, strictly increasing in time.

    ``times`` holds epoch seconds (UTC) and ``power_kw`` kilowatts; both
    are float64 arrays of equal length.
    """

    load_id: str
    times: np.ndarray
    power_kw: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        power = np.asarray(self.power_kw, dtype=np.float64)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "power_kw", power)
        if times.ndim != 1 or power.shape != times.shape:
            raise ValueError("times and power_kw must be 1-d arrays of equal length")
        if times.size == 0:
            raise ValueError("a meter series must contain at least one sample")
        if np.any(np.diff(times) <= 0):
            raise ValueError(f"samples for {self.load_id!r} are not strictly increasing")
        if np.any(power < 0) or not np.all(np.isfinite(power)):
            raise ValueError(f"power for {self.load_id!r} must be finite and non-negative")
        if not np.all(np.isfinite(times)):
            raise ValueError(f"timestamps for {self.load_id!r} must be finite")

    def __len__(self) -> int:
        return int(self.times.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MeterSeries):
            return NotImplemented
        return (
            self.load_id == other.load_id
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.power_kw, other.power_kw)
        )

    @property
    def start(self) -> datetime:
        return to_datetime(float(self.times[0]))

    @property
    def end(self) -> datetime:
        return to_datetime(float(self.times[-1]))

    def samples(self) -> Iterator[MeterSample]:
        for t, p in zip(self.times, self.power_kw):
            yield MeterSample(to_datetime(float(t)), float(p))

    @classmethod
    def from_samples(cls, load_id: str, samples: Iterable[MeterSample]) -> "MeterSeries":
        pairs = [(s.timestamp.timestamp(), s.power_kw) for s in samples]
        times = np.array([t for t, _ in pairs], dtype=np.float64)
        power = np.array([p for _, p in pairs], dtype=np.float64)
        return cls(load_id, times, power)


@dataclass(frozen=True)
class ToleranceBand:
    """Closed duration interval treated as conforming to the rated time."""

    lower_min: float
    upper_min: float

    def __post_init__(self):
        if self.lower_min < 0:
            raise InvalidBand(f"band lower bound {self.lower_min} is negative")
        if self.lower_min > self.upper_min:
            raise InvalidBand(
                f"band lower bound {self.lower_min} exceeds upper bound {self.upper_min}"
            )

    def contains(self, duration_min: float) -> bool:
        return self.lower_min <= duration_min <= self.upper_min


@dataclass(frozen=True)
class LoadSpec:
    """Identity and rated operating envelope of one process load."""

    load_id: str
    name: str
    rated_power_kw: float
    ideal_ton_min: float
    band: ToleranceBand
    role: str = ""

    def __post_init__(self):
        if self.rated_power_kw <= 0:
            raise ValueError(f"rated_power_kw must be > 0 for {self.load_id!r}")
        if self.ideal_ton_min <= 0:
            raise ValueError(f"ideal_ton_min must be > 0 for {self.load_id!r}")


def parse_meter_csv(stream: str | IO[str] | Iterable[str]) -> list[MeterSeries]:
    """Parse long-format meter CSV into one series per load.

    Rows may be interleaved across loads and out of order; each output
    series is sorted by timestamp. Series are returned sorted by
    load_id. Raises MalformedRow for any row violating the sample
    invariants, DuplicateTimestamp for repeated instants within a load,
    and EmptyInput when there are no data rows.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInput("no header row") from None
    if [h.strip() for h in header] != list(CSV_HEADER):
        raise MalformedRow(1, f"expected header {','.join(CSV_HEADER)}, got {','.join(header)}")

    by_load: dict[str, list[tuple[float, float]]] = {}
    n_rows = 0
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise MalformedRow(line_no, f"expected 3 fields, got {len(row)}")
        load_id = row[0].strip()
        if not load_id:
            raise MalformedRow(line_no, "empty load_id")
        try:
            epoch = parse_timestamp(row[1])
        except ValueError as exc:
            raise MalformedRow(line_no, str(exc)) from None
        try:
            power = float(row[2])
        except ValueError:
            raise MalformedRow(line_no, f"bad power value {row[2]!r}") from None
        if not math.isfinite(power) or power < 0:
            raise MalformedRow(line_no, f"power must be finite and >= 0, got {row[2]}")
        by_load.setdefault(load_id, []).append((epoch, power))
        n_rows += 1

    if n_rows == 0:
        raise EmptyInput("no data rows")

    out: list[MeterSeries] = []
    for load_id in sorted(by_load):
        pairs = sorted(by_load[load_id], key=lambda tp: tp[0])
        times = np.array([t for t, _ in pairs], dtype=np.float64)
        if times.size > 1:
            dup = np.flatnonzero(np.diff(times) == 0)
            if dup.size:
                raise DuplicateTimestamp(load_id, to_datetime(float(times[dup[0]])))
        power = np.array([p for _, p in pairs], dtype=np.float64)
        out.append(MeterSeries(load_id, times, power))
    return out


def _format_power(value: float) -> str:
    text = repr(value)
    return text[:-2] if text.endswith(".0") else text


def serialize_meter_csv(series_list: Iterable[MeterSeries]) -> str:
    """Render series back to the meter CSV wire format.

    Parsing the result reproduces the input series sample for sample.
    """
    lines = [",".join(CSV_HEADER)]
    for series in series_list:
        for t, p in zip(series.times, series.power_kw):
            lines.append(f"{series.load_id},{format_timestamp(float(t))},{_format_power(float(p))}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GapFlag:
    """Sampling hole longer than the configured gap threshold."""

    start: datetime
    end: datetime
    gap_min: float


@dataclass(frozen=True)
class OverRatingFlag:
    """Contiguous run of samples above the over-rating limit."""

    start: datetime
    end: datetime
    peak_kw: float
    limit_kw: float
    n_samples: int


@dataclass(frozen=True)
class ValidationReport:
    """Soft findings from validating a series against its load spec."""

    load_id: str
    flags: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.flags


def validate_series(
    series: MeterSeries,
    spec: LoadSpec,
    *,
    gap_threshold_min: float = 30.0,
    over_rating_factor: float = 1.5,
) -> ValidationReport:
    """Flag sampling gaps and implausibly high power readings.

    Findings are advisory: real plant meters drop samples and clamp
    badly, so nothing here rejects the series. The input is never
    mutated. Raises UnknownLoad when the series and spec disagree on
    load_id.
    """
    if series.load_id != spec.load_id:
        raise UnknownLoad(series.load_id)

    flags: list = []
    t = series.times
    gaps = np.diff(t) / 60.0
    for i in np.flatnonzero(gaps > gap_threshold_min):
        flags.append(
            GapFlag(to_datetime(float(t[i])), to_datetime(float(t[i + 1])), float(gaps[i]))
        )

    limit = over_rating_factor * spec.rated_power_kw
    over = series.power_kw > limit
    if over.any():
        padded = np.concatenate(([False], over, [False])).astype(np.int8)
        edges = np.flatnonzero(np.diff(padded))
        for a, b in zip(edges[::2], edges[1::2]):
            run = series.power_kw[a:b]
            flags.append(
                OverRatingFlag(
                    to_datetime(float(t[a])),
                    to_datetime(float(t[b - 1])),
                    float(run.max()),
                    float(limit),
                    int(b - a),
                )
            )

    flags.sort(key=lambda f: f.start)
    return ValidationReport(series.load_id, tuple(flags))
