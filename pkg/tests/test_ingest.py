import random

import numpy as np
import pytest

from loadaudit import (
    DuplicateTimestamp,
    EmptyInput,
    GapFlag,
    LoadSpec,
    MalformedRow,
    OverRatingFlag,
    ToleranceBand,
    UnknownLoad,
    parse_meter_csv,
    serialize_meter_csv,
    validate_series,
)
from helpers import series_from_arrays

HEADER = "load_id,timestamp,power_kw"


def spec(load_id="m1", rated=10.0):
    return LoadSpec(load_id, load_id, rated, 15.0, ToleranceBand(13.0, 18.0))


def test_single_load_in_order():
    text = "\n".join(
        [
            HEADER,
            "m1,2024-01-01T00:00:00+00:00,1.0",
            "m1,2024-01-01T00:01:00+00:00,2.0",
            "m1,2024-01-01T00:02:00+00:00,3.0",
        ]
    )
    series = parse_meter_csv(text)
    assert len(series) == 1
    assert len(series[0]) == 3
    assert series[0].load_id == "m1"
    assert list(series[0].power_kw) == [1.0, 2.0, 3.0]


def test_two_loads_interleaved_sorted():
    text = "\n".join(
        [
            HEADER,
            "b,2024-01-01T00:01:00+00:00,2.0",
            "a,2024-01-01T00:00:30+00:00,5.0",
            "b,2024-01-01T00:00:00+00:00,1.0",
            "a,2024-01-01T00:00:00+00:00,4.0",
        ]
    )
    series = parse_meter_csv(text)
    assert [s.load_id for s in series] == ["a", "b"]
    for s in series:
        assert np.all(np.diff(s.times) > 0)
    assert list(series[1].power_kw) == [1.0, 2.0]


def test_negative_power_rejected():
    text = f"{HEADER}\nm1,2024-01-01T00:00:00+00:00,-1"
    with pytest.raises(MalformedRow) as err:
        parse_meter_csv(text)
    assert err.value.line_no == 2


def test_naive_timestamp_rejected():
    text = f"{HEADER}\nm1,2024-01-01T00:00:00,1.0"
    with pytest.raises(MalformedRow):
        parse_meter_csv(text)


def test_zulu_offset_accepted():
    text = f"{HEADER}\nm1,2024-01-01T00:00:00Z,1.0\nm1,2024-01-01T00:01:00Z,2.0"
    series = parse_meter_csv(text)
    assert series[0].times[0] == 1704067200.0


def test_non_utc_offset_normalized():
    text = f"{HEADER}\nm1,2024-01-01T05:30:00+05:30,1.0"
    series = parse_meter_csv(text)
    assert series[0].times[0] == 1704067200.0


def test_duplicate_timestamp_rejected():
    text = "\n".join(
        [
            HEADER,
            "m1,2024-01-01T00:00:00+00:00,1.0",
            "m1,2024-01-01T00:00:00+00:00,2.0",
        ]
    )
    with pytest.raises(DuplicateTimestamp):
        parse_meter_csv(text)


def test_empty_and_header_only():
    with pytest.raises(EmptyInput):
        parse_meter_csv("")
    with pytest.raises(EmptyInput):
        parse_meter_csv(HEADER + "\n")


def test_bad_header_and_field_count():
    with pytest.raises(MalformedRow):
        parse_meter_csv("a,b\nx,y")
    with pytest.raises(MalformedRow) as err:
        parse_meter_csv(f"{HEADER}\nm1,2024-01-01T00:00:00+00:00")
    assert err.value.line_no == 2


def test_round_trip_identity():
    text = "\n".join(
        [
            HEADER,
            "m1,2024-01-01T00:00:00+00:00,1.25",
            "m1,2024-01-01T00:00:30.250000+00:00,0",
            "m2,2024-01-01T00:00:07+00:00,3.5",
        ]
    )
    once = parse_meter_csv(text)
    again = parse_meter_csv(serialize_meter_csv(once))
    assert once == again


def test_round_trip_random_series():
    rng = random.Random(11)
    times = sorted(rng.sample(range(1_700_000_000, 1_700_050_000), 200))
    power = [round(rng.uniform(0, 20), 3) for _ in times]
    series = [series_from_arrays("r", times, power)]
    assert parse_meter_csv(serialize_meter_csv(series)) == series


def test_rows_partition_into_series():
    rng = random.Random(5)
    rows = []
    clock = {"a": 0, "b": 0, "c": 0}
    for _ in range(300):
        load = rng.choice("abc")
        clock[load] += 60
        rows.append(f"{load},{_iso(clock[load])},{rng.uniform(0, 5):.3f}")
    series = parse_meter_csv(HEADER + "\n" + "\n".join(rows))
    assert sum(len(s) for s in series) == 300
    counts = {s.load_id: len(s) for s in series}
    expected: dict[str, int] = {}
    for row in rows:
        load = row.split(",")[0]
        expected[load] = expected.get(load, 0) + 1
    assert counts == expected


def _iso(offset_s: int) -> str:
    from datetime import datetime, timedelta, timezone

    dt = datetime(2024, 1, 1, tzinfo=timezone.utc) + timedelta(seconds=offset_s)
    return dt.isoformat()


def test_validate_clean_series_empty_report():
    times = 1_700_000_000 + 60.0 * np.arange(120)
    power = np.full(120, 8.0)
    report = validate_series(series_from_arrays("m1", times, power), spec())
    assert report.ok
    assert report.flags == ()


def test_validate_flags_two_hour_gap():
    times = [1_700_000_000.0, 1_700_000_060.0, 1_700_000_060.0 + 7200.0, 1_700_000_060.0 + 7260.0]
    report = validate_series(series_from_arrays("m1", times, [1, 1, 1, 1]), spec())
    gap_flags = [f for f in report.flags if isinstance(f, GapFlag)]
    assert len(gap_flags) == 1
    assert gap_flags[0].gap_min == pytest.approx(120.0)
    assert gap_flags[0].start.timestamp() == 1_700_000_060.0


def test_validate_flags_over_rating():
    # sample at twice the rated power must be flagged (default limit 1.5x)
    times = 1_700_000_000 + 60.0 * np.arange(5)
    power = np.array([1.0, 20.0, 20.0, 1.0, 1.0])
    report = validate_series(series_from_arrays("m1", times, power), spec(rated=10.0))
    over = [f for f in report.flags if isinstance(f, OverRatingFlag)]
    assert len(over) == 1
    assert over[0].peak_kw == 20.0
    assert over[0].n_samples == 2
    assert over[0].limit_kw == 15.0


def test_validate_does_not_mutate():
    times = 1_700_000_000 + 60.0 * np.arange(10)
    power = np.linspace(0, 30, 10)
    series = series_from_arrays("m1", times, power)
    before_t = series.times.copy()
    before_p = series.power_kw.copy()
    validate_series(series, spec(rated=10.0))
    assert np.array_equal(series.times, before_t)
    assert np.array_equal(series.power_kw, before_p)


def test_validate_unknown_load():
    times = [1_700_000_000.0, 1_700_000_060.0]
    with pytest.raises(UnknownLoad):
        validate_series(series_from_arrays("other", times, [1, 1]), spec("m1"))
