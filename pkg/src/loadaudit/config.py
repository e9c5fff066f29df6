"""Plant configuration: the load roster plus pipeline policy defaults.

The config is a single JSON document:

    {
      "loads": [
        {"load_id": "cleaning", "name": "Cascade camplate cleaning",
         "rated_power_kw": 9.6, "ideal_ton_min": 15.0,
         "band_min": [13.0, 18.0], "role": "cleans the finished camplate"}
      ],
      "segmentation": {"on_threshold_fraction": 0.5,
                       "min_on_min": 1.0, "merge_gap_min": 1.0},
      "classification": {"min_band_fraction": 0.5, "underrun_margin": 0.1,
                         "overrun_margin": 0.1, "min_cycles": 10}
    }

``segmentation`` and ``classification`` are optional and fall back to
the package defaults. Unknown keys are ignored.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .classify import DEFAULT_CLASSIFICATION, ClassificationPolicy
from .errors import DuplicateLoadId, InvalidBand, MissingField
from .ingest import LoadSpec, ToleranceBand
from .segmentation import DEFAULT_POLICY, SegmentationPolicy


@dataclass(frozen=True)
class PlantConfig:
    """Everything the analyzer needs to know about the plant."""

    loads: tuple[LoadSpec, ...]
    segmentation: SegmentationPolicy = DEFAULT_POLICY
    classification: ClassificationPolicy = DEFAULT_CLASSIFICATION

    def __post_init__(self):
        ids = [spec.load_id for spec in self.loads]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise DuplicateLoadId(f"duplicate load ids: {', '.join(dup)}")

    def by_id(self) -> dict[str, LoadSpec]:
        return {spec.load_id: spec for spec in self.loads}


def _require(entry: dict, key: str):
    if key not in entry:
        raise MissingField(key)
    return entry[key]


def _parse_load(entry: dict) -> LoadSpec:
    band_pair = _require(entry, "band_min")
    if not isinstance(band_pair, (list, tuple)) or len(band_pair) != 2:
        raise InvalidBand(f"band_min must be a [lower, upper] pair, got {band_pair!r}")
    return LoadSpec(
        load_id=str(_require(entry, "load_id")),
        name=str(_require(entry, "name")),
        rated_power_kw=float(_require(entry, "rated_power_kw")),
        ideal_ton_min=float(_require(entry, "ideal_ton_min")),
        band=ToleranceBand(float(band_pair[0]), float(band_pair[1])),
        role=str(entry.get("role", "")),
    )


def _parse_segmentation(entry: dict) -> SegmentationPolicy:
    kwargs = {}
    if "on_threshold_kw" in entry:
        kwargs["on_threshold_kw"] = float(entry["on_threshold_kw"])
    if "on_threshold_fraction" in entry:
        kwargs["on_threshold_fraction"] = float(entry["on_threshold_fraction"])
    if not kwargs:
        kwargs["on_threshold_fraction"] = DEFAULT_POLICY.on_threshold_fraction
    kwargs["min_on_min"] = float(entry.get("min_on_min", DEFAULT_POLICY.min_on_min))
    kwargs["merge_gap_min"] = float(entry.get("merge_gap_min", DEFAULT_POLICY.merge_gap_min))
    return SegmentationPolicy(**kwargs)


def _parse_classification(entry: dict) -> ClassificationPolicy:
    d = DEFAULT_CLASSIFICATION
    return ClassificationPolicy(
        min_band_fraction=float(entry.get("min_band_fraction", d.min_band_fraction)),
        underrun_margin=float(entry.get("underrun_margin", d.underrun_margin)),
        overrun_margin=float(entry.get("overrun_margin", d.overrun_margin)),
        min_cycles=int(entry.get("min_cycles", d.min_cycles)),
    )


def parse_plant_config(text: str) -> PlantConfig:
    """Parse the JSON plant config document."""
    data = json.loads(text)
    if not isinstance(data, dict) or "loads" not in data:
        raise MissingField("loads")
    loads = tuple(_parse_load(entry) for entry in data["loads"])
    segmentation = _parse_segmentation(data.get("segmentation", {}))
    classification = _parse_classification(data.get("classification", {}))
    return PlantConfig(loads, segmentation, classification)


def serialize_plant_config(config: PlantConfig) -> str:
    """Canonical JSON rendering; parsing it back gives an equal config."""
    seg: dict = {}
    if config.segmentation.on_threshold_kw is not None:
        seg["on_threshold_kw"] = config.segmentation.on_threshold_kw
    else:
        seg["on_threshold_fraction"] = config.segmentation.on_threshold_fraction
    seg["min_on_min"] = config.segmentation.min_on_min
    seg["merge_gap_min"] = config.segmentation.merge_gap_min
    data = {
        "loads": [
            {
                "load_id": spec.load_id,
                "name": spec.name,
                "rated_power_kw": spec.rated_power_kw,
                "ideal_ton_min": spec.ideal_ton_min,
                "band_min": [spec.band.lower_min, spec.band.upper_min],
                "role": spec.role,
            }
            for spec in config.loads
        ],
        "segmentation": seg,
        "classification": {
            "min_band_fraction": config.classification.min_band_fraction,
            "underrun_margin": config.classification.underrun_margin,
            "overrun_margin": config.classification.overrun_margin,
            "min_cycles": config.classification.min_cycles,
        },
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def config_digest(config: PlantConfig) -> str:
    """Stable checksum of the config, for report provenance."""
    return hashlib.sha256(serialize_plant_config(config).encode("utf-8")).hexdigest()


def case_study_config() -> PlantConfig:
    """Roster and policies for the built-in camplate case-study line.

    The ON threshold sits at half the rated power: every pulse then
    crosses it at the midpoint of the interpolation ramp, which keeps
    detected boundaries unbiased on rectangular-pulse data. Rated
    powers match the synthetic pulse powers.
    """
    return PlantConfig(
        loads=(
            LoadSpec(
                load_id="cleaning",
                name="Cascade camplate cleaning",
                rated_power_kw=9.6,
                ideal_ton_min=15.0,
                band=ToleranceBand(13.0, 18.0),
                role="cleans the finished camplate",
            ),
            LoadSpec(
                load_id="shot_peening",
                name="Shot peening",
                rated_power_kw=16.6,
                ideal_ton_min=15.0,
                band=ToleranceBand(13.0, 18.0),
                role="relieves grinding stress in the camplate surface",
            ),
            LoadSpec(
                load_id="trowalising_370",
                name="Trowalising 370",
                rated_power_kw=7.0,
                ideal_ton_min=150.0,
                band=ToleranceBand(151.0, 155.0),
                role="deburrs sharp camplate edges (line 370)",
            ),
            LoadSpec(
                load_id="trowalising_510",
                name="Trowalising 510",
                rated_power_kw=11.0,
                ideal_ton_min=150.0,
                band=ToleranceBand(151.0, 155.0),
                role="deburrs sharp camplate edges (line 510)",
            ),
        ),
        segmentation=SegmentationPolicy(on_threshold_fraction=0.5),
        classification=DEFAULT_CLASSIFICATION,
    )
