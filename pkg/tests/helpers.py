"""Independent reference implementations used as test oracles.

These deliberately do not reuse loadaudit internals: the segmentation
oracle is a slow scan over the sample grid, and the energy oracle is a
refined midpoint Riemann sum. They share only the *definitions* under
test (linear interpolation between samples, threshold semantics).
"""

from __future__ import annotations

import random

import numpy as np

from loadaudit import MeterSeries


def series_from_arrays(load_id, times, power):
    return MeterSeries(load_id, np.asarray(times, float), np.asarray(power, float))


def oracle_energy(times, power, start, end, refine=1000):
    """Midpoint Riemann sum of the interpolated signal, kWh.

    Each sampling interval clipped to [start, end] is split into
    ``refine`` midpoint cells; the signal is linear inside every cell,
    so the sum converges to the exact piecewise-linear integral.
    """
    times = np.asarray(times, float)
    power = np.asarray(power, float)
    total = 0.0
    for i in range(len(times) - 1):
        t0, t1 = times[i], times[i + 1]
        p0, p1 = power[i], power[i + 1]
        a = max(t0, start)
        b = min(t1, end)
        if b <= a:
            continue
        h = (b - a) / refine
        tm = a + (np.arange(refine) + 0.5) * h
        pm = p0 + (p1 - p0) * ((tm - t0) / (t1 - t0))
        total += float(pm.sum()) * h
    return total / 3600.0


def oracle_segment(times, power, threshold, min_on_min, merge_gap_min):
    """Brute-force segmentation over the sample grid.

    Returns (cycles, truncated) where cycles is a list of
    (start_s, end_s) in epoch seconds. Crossings are interpolated
    sample pair by sample pair; runs separated by OFF spans strictly
    shorter than the merge gap are grouped; grouped runs touching the
    window edges count as truncated; the rest are kept when at least
    ``min_on_min`` long.
    """
    times = [float(t) for t in times]
    power = [float(p) for p in power]
    n = len(times)

    runs = []
    i = 0
    while i < n:
        if power[i] >= threshold:
            j = i
            while j + 1 < n and power[j + 1] >= threshold:
                j += 1
            if i == 0:
                start, left_open = times[0], True
            else:
                t0, t1, p0, p1 = times[i - 1], times[i], power[i - 1], power[i]
                start, left_open = t0 + (t1 - t0) * (threshold - p0) / (p1 - p0), False
            if j == n - 1:
                end, right_open = times[-1], True
            else:
                t0, t1, p0, p1 = times[j], times[j + 1], power[j], power[j + 1]
                end, right_open = t0 + (t1 - t0) * (threshold - p0) / (p1 - p0), False
            runs.append((start, end, left_open, right_open))
            i = j + 1
        else:
            i += 1

    merge_gap_s = merge_gap_min * 60.0
    groups = []
    for run in runs:
        if groups and run[0] - groups[-1][-1][1] < merge_gap_s:
            groups[-1].append(run)
        else:
            groups.append([run])

    cycles = []
    truncated = 0
    for group in groups:
        start = group[0][0]
        end = group[-1][1]
        if group[0][2] or group[-1][3]:
            truncated += 1
        elif end - start >= min_on_min * 60.0:
            cycles.append((start, end))
    return cycles, truncated


def random_piecewise_series(rng: random.Random, load_id="sig", n_min=8, n_max=60):
    """Random piecewise-linear power signal at epoch-scale timestamps."""
    n = rng.randint(n_min, n_max)
    t = 1_700_000_000.0
    times = []
    for _ in range(n):
        times.append(t)
        t += rng.uniform(5.0, 180.0)
    power = [rng.uniform(0.0, 12.0) if rng.random() > 0.2 else 0.0 for _ in range(n)]
    return series_from_arrays(load_id, times, power)
