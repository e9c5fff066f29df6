"""End-to-end analysis pipeline and report emission.

``run_analyze`` drives segment -> stats -> histogram -> classify for
every configured load and assembles a Report; ``emit_report`` renders
it as stable JSON (round-trip safe via ``parse_report``) or as a
fixed-layout text table; ``emit_plot_data`` exports per-load histogram
and scatter data as plain CSV for whatever plotting tool is at hand.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone

from .classify import (
    AnomalyFinding,
    Direction,
    Verdict,
    attach_recommendations,
    classify_load,
)
from .config import PlantConfig, config_digest
from .errors import NoMatchingLoads, UnknownLoad
from .ingest import (
    GapFlag,
    MeterSeries,
    OverRatingFlag,
    ValidationReport,
    parse_timestamp,
    to_datetime,
    validate_series,
)
from .segmentation import OnCycle, segment_series
from .stats import (
    DurationHistogram,
    LoadStats,
    build_histogram,
    compute_load_stats,
    scatter_points,
)


@dataclass(frozen=True)
class Diagnostics:
    """Non-verdict findings for one load."""

    truncated_cycles: int
    flags: tuple = ()


@dataclass(frozen=True)
class LoadReport:
    """Everything the pipeline learned about one load."""

    load_id: str
    name: str
    stats: LoadStats | None
    histogram: DurationHistogram | None
    finding: AnomalyFinding
    diagnostics: Diagnostics
    cycles: tuple[OnCycle, ...]


@dataclass(frozen=True)
class Summary:
    normal: int
    anomalous: int
    indeterminate: int


@dataclass(frozen=True)
class Report:
    generated_at: datetime
    config_digest: str
    loads: tuple[LoadReport, ...]
    summary: Summary

    def find_load(self, load_id: str) -> LoadReport:
        for entry in self.loads:
            if entry.load_id == load_id:
                return entry
        raise UnknownLoad(load_id)


def _indeterminate_finding(load_id: str, ideal_ton_min: float) -> AnomalyFinding:
    return AnomalyFinding(
        load_id=load_id,
        verdict=Verdict.INDETERMINATE,
        direction=Direction.NONE,
        band_fraction=0.0,
        stats=None,
        ideal_ton_min=ideal_ton_min,
    )


def run_analyze(
    config: PlantConfig,
    meter_data: list[MeterSeries],
    *,
    bin_width_min: float = 5.0,
    bin_origin_min: float = 0.0,
    now: datetime | None = None,
) -> Report:
    """Analyze all configured loads against the supplied meter series.

    Loads are processed in load_id order, so the report is a pure
    function of (config, meter_data) apart from its generation
    timestamp. Configured loads with no data, or with no detected
    cycles, are reported INDETERMINATE. Series for unconfigured loads
    are ignored; if nothing matches at all, NoMatchingLoads is raised.
    """
    by_load: dict[str, MeterSeries] = {}
    for series in meter_data:
        if series.load_id in by_load:
            raise ValueError(f"more than one series supplied for load {series.load_id!r}")
        by_load[series.load_id] = series

    specs = config.by_id()
    if not set(by_load) & set(specs):
        raise NoMatchingLoads("no supplied series matches a configured load")

    entries: list[LoadReport] = []
    tally = {Verdict.NORMAL: 0, Verdict.ANOMALOUS: 0, Verdict.INDETERMINATE: 0}
    for load_id in sorted(specs):
        spec = specs[load_id]
        series = by_load.get(load_id)
        if series is None:
            finding = _indeterminate_finding(load_id, spec.ideal_ton_min)
            entry = LoadReport(
                load_id, spec.name, None, None, finding, Diagnostics(0), ()
            )
        else:
            validation = validate_series(series, spec)
            segmented = segment_series(series, spec, config.segmentation)
            diagnostics = Diagnostics(segmented.truncated, validation.flags)
            if not segmented.cycles:
                finding = _indeterminate_finding(load_id, spec.ideal_ton_min)
                entry = LoadReport(
                    load_id, spec.name, None, None, finding, diagnostics, ()
                )
            else:
                stats = compute_load_stats(segmented.cycles, spec.band)
                histogram = build_histogram(segmented.cycles, bin_width_min, bin_origin_min)
                finding = attach_recommendations(
                    classify_load(stats, spec, config.classification)
                )
                entry = LoadReport(
                    load_id, spec.name, stats, histogram, finding,
                    diagnostics, segmented.cycles,
                )
        tally[entry.finding.verdict] += 1
        entries.append(entry)

    return Report(
        generated_at=now if now is not None else datetime.now(timezone.utc),
        config_digest=config_digest(config),
        loads=tuple(entries),
        summary=Summary(
            tally[Verdict.NORMAL], tally[Verdict.ANOMALOUS], tally[Verdict.INDETERMINATE]
        ),
    )


# --- structured (JSON) form ------------------------------------------------


def _stats_to_dict(stats: LoadStats | None):
    if stats is None:
        return None
    return {
        "n_cycles": stats.n_cycles,
        "mean_duration_min": stats.mean_duration_min,
        "std_duration_min": stats.std_duration_min,
        "mean_energy_kwh": stats.mean_energy_kwh,
        "std_energy_kwh": stats.std_energy_kwh,
        "max_energy_kwh": stats.max_energy_kwh,
        "n_within_band": stats.n_within_band,
    }


def _flag_to_dict(flag) -> dict:
    if isinstance(flag, GapFlag):
        return {
            "kind": "gap",
            "start": flag.start.isoformat(),
            "end": flag.end.isoformat(),
            "gap_min": flag.gap_min,
        }
    if isinstance(flag, OverRatingFlag):
        return {
            "kind": "over_rating",
            "start": flag.start.isoformat(),
            "end": flag.end.isoformat(),
            "peak_kw": flag.peak_kw,
            "limit_kw": flag.limit_kw,
            "n_samples": flag.n_samples,
        }
    raise TypeError(f"unknown flag type: {flag!r}")


def _flag_from_dict(data: dict):
    if data["kind"] == "gap":
        return GapFlag(
            to_datetime(parse_timestamp(data["start"])),
            to_datetime(parse_timestamp(data["end"])),
            float(data["gap_min"]),
        )
    if data["kind"] == "over_rating":
        return OverRatingFlag(
            to_datetime(parse_timestamp(data["start"])),
            to_datetime(parse_timestamp(data["end"])),
            float(data["peak_kw"]),
            float(data["limit_kw"]),
            int(data["n_samples"]),
        )
    raise ValueError(f"unknown flag kind {data.get('kind')!r}")


def report_to_dict(report: Report) -> dict:
    loads = []
    for entry in report.loads:
        finding = entry.finding
        loads.append(
            {
                "load_id": entry.load_id,
                "name": entry.name,
                "stats": _stats_to_dict(entry.stats),
                "histogram": None
                if entry.histogram is None
                else {
                    "edges": list(entry.histogram.edges),
                    "counts": list(entry.histogram.counts),
                    "total": entry.histogram.total,
                },
                "finding": {
                    "verdict": finding.verdict.value,
                    "direction": finding.direction.value,
                    "band_fraction": finding.band_fraction,
                    "ideal_ton_min": finding.ideal_ton_min,
                    "causes": list(finding.causes),
                    "remedies": list(finding.remedies),
                },
                "diagnostics": {
                    "truncated_cycles": entry.diagnostics.truncated_cycles,
                    "flags": [_flag_to_dict(f) for f in entry.diagnostics.flags],
                },
                "cycles": [
                    {
                        "start": c.start.isoformat(),
                        "end": c.end.isoformat(),
                        "duration_min": c.duration_min,
                        "energy_kwh": c.energy_kwh,
                    }
                    for c in entry.cycles
                ],
            }
        )
    return {
        "generated_at": report.generated_at.isoformat(),
        "config_digest": report.config_digest,
        "loads": loads,
        "summary": {
            "normal": report.summary.normal,
            "anomalous": report.summary.anomalous,
            "indeterminate": report.summary.indeterminate,
        },
    }


def report_from_dict(data: dict) -> Report:
    loads = []
    for entry in data["loads"]:
        stats = entry["stats"]
        stats_obj = None if stats is None else LoadStats(**stats)
        hist = entry["histogram"]
        hist_obj = (
            None
            if hist is None
            else DurationHistogram(tuple(hist["edges"]), tuple(hist["counts"]), hist["total"])
        )
        f = entry["finding"]
        finding = AnomalyFinding(
            load_id=entry["load_id"],
            verdict=Verdict(f["verdict"]),
            direction=Direction(f["direction"]),
            band_fraction=float(f["band_fraction"]),
            stats=stats_obj,
            ideal_ton_min=float(f["ideal_ton_min"]),
            causes=tuple(f["causes"]),
            remedies=tuple(f["remedies"]),
        )
        diag = entry["diagnostics"]
        cycles = tuple(
            OnCycle(
                load_id=entry["load_id"],
                start=to_datetime(parse_timestamp(c["start"])),
                end=to_datetime(parse_timestamp(c["end"])),
                duration_min=float(c["duration_min"]),
                energy_kwh=float(c["energy_kwh"]),
            )
            for c in entry["cycles"]
        )
        loads.append(
            LoadReport(
                load_id=entry["load_id"],
                name=entry["name"],
                stats=stats_obj,
                histogram=hist_obj,
                finding=finding,
                diagnostics=Diagnostics(
                    diag["truncated_cycles"],
                    tuple(_flag_from_dict(f) for f in diag["flags"]),
                ),
                cycles=cycles,
            )
        )
    summary = data["summary"]
    return Report(
        generated_at=to_datetime(parse_timestamp(data["generated_at"])),
        config_digest=data["config_digest"],
        loads=tuple(loads),
        summary=Summary(summary["normal"], summary["anomalous"], summary["indeterminate"]),
    )


# --- rendering --------------------------------------------------------------

_TEXT_COLUMNS = (
    f"{'Load':<20} {'Cycles':>7} {'MeanMin':>9} {'SdMin':>8} "
    f"{'MeanKWh':>9} {'SdKWh':>8} {'InBand':>7} {'Trunc':>6}  {'Verdict':<13} {'Direction':<10}"
)


def _text_table(report: Report) -> str:
    lines = [
        f"Process line report  generated={report.generated_at.isoformat()}",
        f"config_digest={report.config_digest}",
        "",
        _TEXT_COLUMNS,
        "-" * len(_TEXT_COLUMNS),
    ]
    for entry in report.loads:
        s = entry.stats
        if s is None:
            row = (
                f"{entry.load_id:<20} {0:>7} {'-':>9} {'-':>8} {'-':>9} {'-':>8} "
                f"{'-':>7} {entry.diagnostics.truncated_cycles:>6}  "
                f"{entry.finding.verdict.value.upper():<13} {entry.finding.direction.value:<10}"
            )
        else:
            row = (
                f"{entry.load_id:<20} {s.n_cycles:>7} {s.mean_duration_min:>9.2f} "
                f"{s.std_duration_min:>8.2f} {s.mean_energy_kwh:>9.2f} {s.std_energy_kwh:>8.2f} "
                f"{s.n_within_band:>7} {entry.diagnostics.truncated_cycles:>6}  "
                f"{entry.finding.verdict.value.upper():<13} {entry.finding.direction.value:<10}"
            )
        lines.append(row.rstrip())
    lines.append("")
    lines.append(
        f"Summary: {report.summary.normal} normal / {report.summary.anomalous} anomalous / "
        f"{report.summary.indeterminate} indeterminate"
    )
    for entry in report.loads:
        if entry.finding.verdict is Verdict.ANOMALOUS:
            lines.append("")
            lines.append(f"{entry.load_id}: probable causes")
            lines.extend(f"  - {c}" for c in entry.finding.causes)
            lines.append(f"{entry.load_id}: proposed remedies")
            lines.extend(f"  - {r}" for r in entry.finding.remedies)
    return "\n".join(lines) + "\n"


def emit_report(report: Report, fmt: str = "structured") -> str:
    """Render a report: ``structured`` JSON or a fixed-layout ``text`` table."""
    if fmt == "structured":
        return json.dumps(report_to_dict(report), indent=2) + "\n"
    if fmt == "text":
        return _text_table(report)
    raise ValueError(f"unknown report format {fmt!r}")


def parse_report(text: str) -> Report:
    """Inverse of emit_report(..., 'structured')."""
    return report_from_dict(json.loads(text))


def emit_plot_data(report: Report, kind: str, load_id: str) -> str:
    """Plot-ready CSV for one load: ``histogram`` bins or ``scatter`` points."""
    entry = report.find_load(load_id)
    if kind == "histogram":
        lines = ["bin_lo_min,bin_hi_min,count"]
        if entry.histogram is not None:
            for (lo, hi), count in zip(entry.histogram.bins, entry.histogram.counts):
                lines.append(f"{lo!r},{hi!r},{count}")
        return "\n".join(lines) + "\n"
    if kind == "scatter":
        lines = ["duration_min,energy_kwh"]
        for duration, energy in scatter_points(entry.cycles):
            lines.append(f"{duration!r},{energy!r}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown plot kind {kind!r}")
