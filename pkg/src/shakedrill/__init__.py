"""shakedrill: a scenario earthquake drill engine.

Pipeline: scenario ground-motion field -> site intensity measures -> elastic
SDOF response -> fragility-based damage states -> color-coded tags, expected
loss, and an early-warning countdown. Exposed as a library, a CLI, and an
HTTP service for the drill-console UI.
"""

from .early_warning import (
    InvalidTickError,
    RuptureScenario,
    WarningEstimate,
    arrival_times,
    countdown_track,
    warning_for_distance,
)
from .fragility import (
    ComponentSpec,
    DamagePMF,
    EDPType,
    FragilityCurve,
    TagColor,
    default_tag_map,
    ds_pmf,
    expected_loss,
    p_exceed,
    parse_fragility_library,
    sample_ds,
    tag_for,
)
from .gm_field import (
    GroundMotionField,
    IMRecord,
    OutOfBoundsError,
    SitePoint,
    distance_km,
    lookup_im,
    parse_gm_grid,
    serialize_gm_grid,
)
from .scenario import (
    FilesSource,
    ManifestError,
    MissingEDPError,
    RoomInventory,
    RoomType,
    ScenarioBundle,
    SimulationReport,
    SynthesizeSource,
    UnknownRoomError,
    load_bundle,
    monte_carlo_loss,
    report_from_text,
    report_to_text,
    run_drill,
    site_envelope,
)
from .service import ServiceConfig, build_app, serve
from .timeseries import (
    AccelTimeSeries,
    IntensityEnvelope,
    ResponseResult,
    SDOFConfig,
    intensity_envelope,
    newmark_response,
    parse_accel,
    peak_ground_values,
    response_spectrum,
    synthesize_accel,
)

__version__ = "0.1.0"
