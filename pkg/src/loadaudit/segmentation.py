"""ON-cycle extraction from power time series.

A cycle is a maximal interval where power sits at or above the ON
threshold. Boundary instants are linearly interpolated between the two
samples straddling the threshold, so the result is invariant under
refinement of the sampling grid. Short OFF gaps are bridged before
short ON bursts are discarded, and per-cycle energy is the trapezoidal
integral of the piecewise-linear power signal over the cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

import numpy as np

from .errors import OutOfRange, UnresolvedThreshold
from .ingest import LoadSpec, MeterSeries, to_datetime


@dataclass(frozen=True)
class SegmentationPolicy:
    """How ON-cycles are carved out of a raw power signal.

    Exactly one of ``on_threshold_kw`` (absolute) and
    ``on_threshold_fraction`` (fraction of the load's rated power,
    resolved at run time) must be given. ``min_on_min`` debounces meter
    flicker: merged cycles shorter than this are discarded.
    ``merge_gap_min`` bridges OFF dips strictly shorter than itself.
    """

    on_threshold_kw: float | None = None
    on_threshold_fraction: float | None = None
    min_on_min: float = 1.0
    merge_gap_min: float = 1.0

    def __post_init__(self):
        if (self.on_threshold_kw is None) == (self.on_threshold_fraction is None):
            raise ValueError("set exactly one of on_threshold_kw / on_threshold_fraction")
        if self.on_threshold_kw is not None and self.on_threshold_kw <= 0:
            raise ValueError("on_threshold_kw must be > 0")
        if self.on_threshold_fraction is not None and not 0 < self.on_threshold_fraction <= 1:
            raise ValueError("on_threshold_fraction must be in (0, 1]")
        if self.min_on_min < 0 or self.merge_gap_min < 0:
            raise ValueError("min_on_min and merge_gap_min must be >= 0")


DEFAULT_POLICY = SegmentationPolicy(on_threshold_fraction=0.1)


def resolve_threshold_kw(policy: SegmentationPolicy, rated_power_kw: float | None) -> float:
    """Turn a policy into an absolute kW threshold for one load."""
    if policy.on_threshold_kw is not None:
        return policy.on_threshold_kw
    if rated_power_kw is None or rated_power_kw <= 0:
        raise UnresolvedThreshold(
            "policy uses a fractional ON threshold but no rated power is available"
        )
    return policy.on_threshold_fraction * rated_power_kw


@dataclass(frozen=True)
class OnCycle:
    """One ON episode with its integrated energy."""

    load_id: str
    start: datetime
    end: datetime
    duration_min: float
    energy_kwh: float

    def __post_init__(self):
        if self.duration_min <= 0:
            raise ValueError("cycle duration must be > 0")
        if self.energy_kwh < 0:
            raise ValueError("cycle energy must be >= 0")
        span_min = (self.end - self.start).total_seconds() / 60.0
        # start/end are microsecond-rounded; duration_min is authoritative
        if abs(span_min - self.duration_min) > 1e-6:
            raise ValueError("duration_min does not match the start/end span")


@dataclass(frozen=True)
class SegmentationResult:
    """Detected cycles plus the count of window-truncated episodes."""

    cycles: tuple[OnCycle, ...]
    truncated: int


def _as_epoch(instant: datetime | float) -> float:
    if isinstance(instant, datetime):
        if instant.tzinfo is None:
            raise ValueError("naive datetimes are not accepted")
        return instant.timestamp()
    return float(instant)


def _integrate_epoch(t: np.ndarray, p: np.ndarray, s: float, e: float) -> float:
    """Trapezoidal integral of the interpolated signal over [s, e] in kWh."""
    i = np.searchsorted(t, s, side="right")
    j = np.searchsorted(t, e, side="left")
    ps = np.interp(s, t, p)
    pe = np.interp(e, t, p)
    xs = np.concatenate(([s], t[i:j], [e]))
    ys = np.concatenate(([ps], p[i:j], [pe]))
    kw_seconds = float(np.sum((ys[1:] + ys[:-1]) * np.diff(xs)) * 0.5)
    return kw_seconds / 3600.0


def integrate_energy(series: MeterSeries, start: datetime | float, end: datetime | float) -> float:
    """Energy in kWh over [start, end], endpoints interpolated linearly.

    Raises OutOfRange if the interval extends beyond the sampled span,
    and ValueError if start is not strictly before end.
    """
    s = _as_epoch(start)
    e = _as_epoch(end)
    if s >= e:
        raise ValueError("start must be strictly before end")
    t = series.times
    if s < t[0] or e > t[-1]:
        raise OutOfRange(
            f"interval [{format(s, '.3f')}, {format(e, '.3f')}] exceeds the sampled span"
        )
    return _integrate_epoch(t, series.power_kw, s, e)


def _crossing(t0: float, p0: float, t1: float, p1: float, thr: float) -> float:
    return t0 + (t1 - t0) * ((thr - p0) / (p1 - p0))


def _raw_intervals(t: np.ndarray, p: np.ndarray, thr: float):
    """Maximal ON intervals as (start, end, left_trunc, right_trunc)."""
    mask = p >= thr
    if not mask.any():
        return []
    m = mask.astype(np.int8)
    d = np.diff(m)
    run_starts = (np.flatnonzero(d == 1) + 1).tolist()
    run_ends = np.flatnonzero(d == -1).tolist()
    if mask[0]:
        run_starts.insert(0, 0)
    if mask[-1]:
        run_ends.append(len(mask) - 1)

    out = []
    for i0, i1 in zip(run_starts, run_ends):
        if i0 == 0:
            ts, lt = float(t[0]), True
        else:
            ts, lt = _crossing(float(t[i0 - 1]), float(p[i0 - 1]), float(t[i0]), float(p[i0]), thr), False
        if i1 == len(t) - 1:
            te, rt = float(t[-1]), True
        else:
            te, rt = _crossing(float(t[i1]), float(p[i1]), float(t[i1 + 1]), float(p[i1 + 1]), thr), False
        out.append((ts, te, lt, rt))
    return out


def segment_series(
    series: MeterSeries,
    spec: LoadSpec,
    policy: SegmentationPolicy = DEFAULT_POLICY,
) -> SegmentationResult:
    """Detect ON-cycles and count episodes truncated by the data window.

    Intervals whose OFF separation is strictly below ``merge_gap_min``
    are bridged first; merged intervals shorter than ``min_on_min`` are
    then discarded. An interval touching the first or last sample while
    still ON has an unknowable true duration, so it is excluded from the
    cycle list and tallied as truncated instead (even when it is also
    shorter than the debounce floor).
    """
    thr = resolve_threshold_kw(policy, spec.rated_power_kw)
    t = series.times
    p = series.power_kw
    raw = _raw_intervals(t, p, thr)

    merge_gap_s = policy.merge_gap_min * 60.0
    merged: list[list] = []
    for ts, te, lt, rt in raw:
        if merged and ts - merged[-1][1] < merge_gap_s:
            merged[-1][1] = te
            merged[-1][3] = rt
        else:
            merged.append([ts, te, lt, rt])

    min_on_s = policy.min_on_min * 60.0
    cycles: list[OnCycle] = []
    truncated = 0
    for ts, te, lt, rt in merged:
        if lt or rt:
            truncated += 1
            continue
        if te - ts < min_on_s:
            continue
        cycles.append(
            OnCycle(
                load_id=series.load_id,
                start=to_datetime(ts),
                end=to_datetime(te),
                duration_min=(te - ts) / 60.0,
                energy_kwh=_integrate_epoch(t, p, ts, te),
            )
        )
    return SegmentationResult(tuple(cycles), truncated)


def detect_cycles(
    series: MeterSeries,
    spec: LoadSpec,
    policy: SegmentationPolicy = DEFAULT_POLICY,
) -> list[OnCycle]:
    """Cycles only; see segment_series for the truncation diagnostic."""
    return list(segment_series(series, spec, policy).cycles)
