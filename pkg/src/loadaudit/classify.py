"""Per-load verdicts against the rated cycle time.

A load is judged by the share of its cycles whose duration falls inside
the configured tolerance band. Verdict and direction are independent
axes: a load can average slightly short yet still be accepted when most
cycles conform, which is exactly how plant engineers read these charts.
Anomalous loads get the full cause/remedy catalog attached, since the
catalog does not map individual causes to directions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .errors import ZeroCycles
from .ingest import LoadSpec
from .stats import LoadStats


class Verdict(str, enum.Enum):
    NORMAL = "normal"
    ANOMALOUS = "anomalous"
    INDETERMINATE = "indeterminate"


class Direction(str, enum.Enum):
    UNDER_RUN = "under_run"
    OVER_RUN = "over_run"
    MIXED = "mixed"
    NONE = "none"


@dataclass(frozen=True)
class ClassificationPolicy:
    """Thresholds for the verdict and the anomaly direction.

    ``min_band_fraction`` is the minimum share of in-band cycles for a
    NORMAL verdict. The margins define how far the mean duration must
    drift from the ideal before the anomaly is labelled under- or
    over-run; inside both margins an anomalous load is MIXED.
    ``min_cycles`` guards against judging a load on too little data.
    """

    min_band_fraction: float = 0.5
    underrun_margin: float = 0.1
    overrun_margin: float = 0.1
    min_cycles: int = 10

    def __post_init__(self):
        for name in ("min_band_fraction", "underrun_margin", "overrun_margin"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.min_cycles < 1:
            raise ValueError("min_cycles must be >= 1")


DEFAULT_CLASSIFICATION = ClassificationPolicy()


@dataclass(frozen=True)
class CauseCatalog:
    """Report catalog of probable causes and proposed remedies."""

    causes: tuple[str, ...]
    remedies: tuple[str, ...]


DEFAULT_CATALOG = CauseCatalog(
    causes=(
        "the process being operated in under load or over load",
        "enhanced machine down time during process cycle",
        "human error during manual operations of the load",
        "machine exceeding thermal limits",
        "supply problems",
        "sudden change in batch size",
    ),
    remedies=(
        "routine maintenance checks",
        "Keep suggested batch size",
        "aversion of sudden changes in batch size (in case to meet production target)",
        "standardization of work: fool proofing, bench marking",
    ),
)


@dataclass(frozen=True)
class AnomalyFinding:
    """Verdict for one load with the evidence that produced it."""

    load_id: str
    verdict: Verdict
    direction: Direction
    band_fraction: float
    stats: LoadStats | None
    ideal_ton_min: float
    causes: tuple[str, ...] = ()
    remedies: tuple[str, ...] = ()


def classify_load(
    stats: LoadStats,
    spec: LoadSpec,
    policy: ClassificationPolicy = DEFAULT_CLASSIFICATION,
) -> AnomalyFinding:
    """Classify one load from its cycle statistics.

    Deterministic in its inputs: the verdict depends only on the
    in-band fraction, the cycle count and the policy; the direction
    only on the mean duration, the ideal duration and the margins.
    """
    if stats.n_cycles == 0:
        raise ZeroCycles(f"load {spec.load_id!r} has no cycles to classify")

    band_fraction = stats.n_within_band / stats.n_cycles
    if stats.n_cycles < policy.min_cycles:
        verdict = Verdict.INDETERMINATE
        direction = Direction.NONE
    elif band_fraction >= policy.min_band_fraction:
        verdict = Verdict.NORMAL
        direction = Direction.NONE
    else:
        verdict = Verdict.ANOMALOUS
        mean = stats.mean_duration_min
        if mean < spec.ideal_ton_min * (1.0 - policy.underrun_margin):
            direction = Direction.UNDER_RUN
        elif mean > spec.ideal_ton_min * (1.0 + policy.overrun_margin):
            direction = Direction.OVER_RUN
        else:
            direction = Direction.MIXED

    return AnomalyFinding(
        load_id=spec.load_id,
        verdict=verdict,
        direction=direction,
        band_fraction=band_fraction,
        stats=stats,
        ideal_ton_min=spec.ideal_ton_min,
    )


def attach_recommendations(
    finding: AnomalyFinding,
    catalog: CauseCatalog = DEFAULT_CATALOG,
) -> AnomalyFinding:
    """Attach the catalog to anomalous findings; idempotent.

    Normal and indeterminate findings carry empty lists: there is
    nothing to remedy, or not enough data to say.
    """
    if finding.verdict is Verdict.ANOMALOUS:
        return replace(finding, causes=catalog.causes, remedies=catalog.remedies)
    return replace(finding, causes=(), remedies=())
