"""Descriptive statistics over detected ON-cycles.

Standard deviations are population deviations (divisor n): the cycle
set is the entire observed population for the reporting window, not a
sample from a larger one. Band membership uses the closed interval so
"between 13 and 18 minutes" reads inclusively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EmptyCycleList
from .ingest import ToleranceBand
from .segmentation import OnCycle


@dataclass(frozen=True)
class DurationHistogram:
    """Cycle counts per half-open duration bin [lo, hi) in minutes."""

    edges: tuple[float, ...]
    counts: tuple[int, ...]
    total: int

    def __post_init__(self):
        if len(self.edges) != len(self.counts) + 1:
            raise ValueError("need exactly one more edge than counts")
        if any(b <= a for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("bin edges must be strictly increasing")
        if any(c < 0 for c in self.counts):
            raise ValueError("bin counts must be non-negative")
        if sum(self.counts) != self.total:
            raise ValueError("bin counts must sum to the total")

    @property
    def bins(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self.edges[:-1], self.edges[1:]))


@dataclass(frozen=True)
class LoadStats:
    """Duration/energy moments of one load's cycle population."""

    n_cycles: int
    mean_duration_min: float
    std_duration_min: float
    mean_energy_kwh: float
    std_energy_kwh: float
    max_energy_kwh: float
    n_within_band: int

    def __post_init__(self):
        if self.n_cycles < 0 or self.n_within_band < 0:
            raise ValueError("counts must be non-negative")
        if self.n_within_band > self.n_cycles:
            raise ValueError("n_within_band cannot exceed n_cycles")
        if self.std_duration_min < 0 or self.std_energy_kwh < 0:
            raise ValueError("standard deviations must be non-negative")


def build_histogram(
    cycles: Sequence[OnCycle],
    bin_width_min: float = 5.0,
    origin_min: float = 0.0,
) -> DurationHistogram:
    """Bin cycle durations into [origin + k*w, origin + (k+1)*w).

    Bins cover the observed min..max durations contiguously; empty
    interior bins are kept so bar charts render gaps honestly. Raises
    EmptyCycleList for no cycles (distinct from all-zero bins).
    """
    if bin_width_min <= 0:
        raise ValueError("bin_width_min must be > 0")
    if origin_min < 0:
        raise ValueError("origin_min must be >= 0")
    if not cycles:
        raise EmptyCycleList("cannot build a histogram from zero cycles")

    idx = [math.floor((c.duration_min - origin_min) / bin_width_min) for c in cycles]
    k_lo = min(idx)
    k_hi = max(idx)
    if origin_min + k_lo * bin_width_min < 0:
        k_lo = math.ceil(-origin_min / bin_width_min)  # durations are positive
    counts = [0] * (k_hi - k_lo + 1)
    for k in idx:
        counts[k - k_lo] += 1
    edges = tuple(origin_min + k * bin_width_min for k in range(k_lo, k_hi + 2))
    return DurationHistogram(edges, tuple(counts), len(cycles))


def _population_std(values: Sequence[float], mean: float) -> float:
    return math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))


def compute_load_stats(cycles: Sequence[OnCycle], band: ToleranceBand) -> LoadStats:
    """Means, population deviations, in-band count and peak energy."""
    if not cycles:
        raise EmptyCycleList("cannot compute stats for zero cycles")
    durations = [c.duration_min for c in cycles]
    energies = [c.energy_kwh for c in cycles]
    mean_d = math.fsum(durations) / len(durations)
    mean_e = math.fsum(energies) / len(energies)
    return LoadStats(
        n_cycles=len(cycles),
        mean_duration_min=mean_d,
        std_duration_min=_population_std(durations, mean_d),
        mean_energy_kwh=mean_e,
        std_energy_kwh=_population_std(energies, mean_e),
        max_energy_kwh=max(energies),
        n_within_band=sum(band.contains(d) for d in durations),
    )


def scatter_points(cycles: Iterable[OnCycle]) -> list[tuple[float, float]]:
    """(duration_min, energy_kwh) per cycle, input order preserved."""
    return [(c.duration_min, c.energy_kwh) for c in cycles]
