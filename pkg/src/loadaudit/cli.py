"""Command line interface.

Subcommands:
  analyze   run the pipeline over meter CSVs and write a report
  simulate  synthesize a meter CSV from a built-in or file profile
  report    export plot data (histogram/scatter) from a saved report

Exit codes: 0 all loads normal (or indeterminate), 2 anomalies found,
1 any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import synth
from .config import parse_plant_config
from .errors import DuplicateTimestamp, LoadAuditError
from .ingest import MeterSeries, parse_meter_csv, serialize_meter_csv, to_datetime
from .report import emit_plot_data, emit_report, parse_report, run_analyze


def _load_meters(paths: list[str]) -> list[MeterSeries]:
    """Parse one or more meter CSVs, merging per-load across files."""
    groups: dict[str, list[MeterSeries]] = {}
    for path in paths:
        for series in parse_meter_csv(Path(path).read_text(encoding="utf-8")):
            groups.setdefault(series.load_id, []).append(series)
    merged = []
    for load_id in sorted(groups):
        parts = groups[load_id]
        if len(parts) == 1:
            merged.append(parts[0])
            continue
        times = np.concatenate([p.times for p in parts])
        power = np.concatenate([p.power_kw for p in parts])
        order = np.argsort(times, kind="stable")
        times = times[order]
        power = power[order]
        dup = np.flatnonzero(np.diff(times) == 0)
        if dup.size:
            raise DuplicateTimestamp(load_id, to_datetime(float(times[dup[0]])))
        merged.append(MeterSeries(load_id, times, power))
    return merged


def _cmd_analyze(args: argparse.Namespace) -> int:
    config = parse_plant_config(Path(args.config).read_text(encoding="utf-8"))
    meters = _load_meters(args.meters)
    report = run_analyze(config, meters, bin_width_min=args.bin_width)

    if args.seed_check:
        again = run_analyze(config, meters, bin_width_min=args.bin_width)
        one = emit_report(replace(report, generated_at=again.generated_at), "structured")
        two = emit_report(again, "structured")
        if one != two:
            print("determinism check failed: reports differ beyond the timestamp", file=sys.stderr)
            return 1
        print("determinism check: ok")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    suffix = "json" if args.format == "structured" else "txt"
    out_path = out_dir / f"report.{suffix}"
    out_path.write_text(emit_report(report, args.format), encoding="utf-8")

    print(
        f"analyzed {len(report.loads)} loads: "
        f"{report.summary.normal} normal, {report.summary.anomalous} anomalous, "
        f"{report.summary.indeterminate} indeterminate -> {out_path}"
    )
    return 2 if report.summary.anomalous > 0 else 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    name_or_path = args.profile
    if Path(name_or_path).is_file():
        profile = synth.profile_from_dict(
            json.loads(Path(name_or_path).read_text(encoding="utf-8"))
        )
    else:
        try:
            profile = synth.case_study_profile(name_or_path)
        except KeyError as exc:
            raise LoadAuditError(str(exc)) from None

    series, truth = synth.generate_series(profile, args.seed)
    Path(args.out).write_text(serialize_meter_csv([series]), encoding="utf-8")
    print(f"wrote {len(series)} samples, {len(truth.cycles)} cycles -> {args.out}")

    if args.truth_out:
        payload = {
            "load_id": profile.load_id,
            "seed": truth.seed,
            "profile": synth.profile_to_dict(profile),
            "cycles": [
                {
                    "start": c.start.isoformat(),
                    "end": c.end.isoformat(),
                    "duration_min": c.duration_min,
                    "energy_kwh": c.energy_kwh,
                }
                for c in truth.cycles
            ],
        }
        Path(args.truth_out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"wrote ground truth -> {args.truth_out}")
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    report = parse_report(Path(args.infile).read_text(encoding="utf-8"))
    sys.stdout.write(emit_plot_data(report, args.plot, args.load))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loadaudit",
        description="Duty-cycle energy analytics for batch process lines",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="analyze meter data against a plant config")
    p_analyze.add_argument("--config", required=True, help="plant config JSON")
    p_analyze.add_argument("--meters", required=True, nargs="+", help="meter CSV file(s)")
    p_analyze.add_argument("--out", required=True, help="output directory")
    p_analyze.add_argument("--format", choices=("structured", "text"), default="structured")
    p_analyze.add_argument("--bin-width", type=float, default=5.0, help="histogram bin width, minutes")
    p_analyze.add_argument(
        "--seed-check",
        action="store_true",
        help="run the analysis twice and verify byte-identical output",
    )
    p_analyze.set_defaults(func=_cmd_analyze)

    p_sim = sub.add_parser("simulate", help="generate a synthetic meter CSV")
    p_sim.add_argument(
        "--profile",
        required=True,
        help="built-in profile name (cleaning, shot_peening, trowalising_370, "
        "trowalising_510) or a profile JSON file",
    )
    p_sim.add_argument("--seed", required=True, type=int)
    p_sim.add_argument("--out", required=True, help="output meter CSV path")
    p_sim.add_argument("--truth-out", help="optional ground-truth JSON path")
    p_sim.set_defaults(func=_cmd_simulate)

    p_rep = sub.add_parser("report", help="export plot data from a structured report")
    p_rep.add_argument("--in", dest="infile", required=True, help="structured report JSON")
    p_rep.add_argument("--plot", choices=("histogram", "scatter"), required=True)
    p_rep.add_argument("--load", required=True, help="load_id to export")
    p_rep.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LoadAuditError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
