"""Duty-cycle energy analytics for batch process lines.

Given per-load meter time series and a plant config, loadaudit extracts
ON-cycles with integrated energy, computes duration/energy statistics
and histograms, classifies each load's operation against its rated
cycle time, and emits reports with plot-ready data. A seeded synthetic
generator with exact ground truth backs testing and what-if runs.
"""

from .classify import (
    DEFAULT_CATALOG,
    DEFAULT_CLASSIFICATION,
    AnomalyFinding,
    CauseCatalog,
    ClassificationPolicy,
    Direction,
    Verdict,
    attach_recommendations,
    classify_load,
)
from .config import (
    PlantConfig,
    case_study_config,
    config_digest,
    parse_plant_config,
    serialize_plant_config,
)
from .errors import (
    DuplicateLoadId,
    DuplicateTimestamp,
    EmptyCycleList,
    EmptyInput,
    InfeasibleProfile,
    InvalidBand,
    LoadAuditError,
    MalformedRow,
    MissingField,
    NoMatchingLoads,
    OutOfRange,
    UnknownLoad,
    UnresolvedThreshold,
    ZeroCycles,
)
from .ingest import (
    GapFlag,
    LoadSpec,
    MeterSample,
    MeterSeries,
    OverRatingFlag,
    ToleranceBand,
    ValidationReport,
    parse_meter_csv,
    serialize_meter_csv,
    validate_series,
)
from .report import (
    Diagnostics,
    LoadReport,
    Report,
    Summary,
    emit_plot_data,
    emit_report,
    parse_report,
    run_analyze,
)
from .segmentation import (
    DEFAULT_POLICY,
    OnCycle,
    SegmentationPolicy,
    SegmentationResult,
    detect_cycles,
    integrate_energy,
    resolve_threshold_kw,
    segment_series,
)
from .stats import (
    DurationHistogram,
    LoadStats,
    build_histogram,
    compute_load_stats,
    scatter_points,
)
from .synth import (
    CASE_STUDY_SEED,
    Constant,
    CycleProfile,
    Mixture,
    Normal,
    SynthGroundTruth,
    Uniform,
    case_study_profile,
    case_study_profiles,
    generate_series,
)

__version__ = "0.1.0"
