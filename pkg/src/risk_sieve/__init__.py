"""Collision-risk filtering for multi-agent driving recordings."""

from .baselines import BaselineVerdict, assess_track, kalman_fde, ttp_flag
from .config import (
    ConfigError,
    FilterConfig,
    canonical_text,
    config_hash,
    load_config,
    parse_config,
)
from .graph import (
    AgentStatus,
    FirstOrderSituation,
    InteractionGraph,
    RiskEdge,
    SecondOrderSituation,
    build_graph,
    eligible_pair,
    pair_risk,
    retrieve_first_order,
    retrieve_second_order,
    valuable_users,
)
from .prediction import (
    GaussianComponent,
    MixturePrediction,
    UncertaintySpec,
    build_component,
    curve_offsets,
    decompose_along_path,
    make_uncertainty_spec,
    path_turn_angle,
    predict_cv_states,
    predict_mixture,
    uncertainty_at,
)
from .pipeline import PipelineResult, read_jsonl, run_pipeline
from .reports import (
    ConfusionMatrix,
    confusion_matrix,
    first_order_type_key,
    second_order_type_key,
    type_histograms,
    write_confusion_csv,
    write_histograms_csv,
)
from .risk import (
    UNDERFLOW_LIMIT,
    collision_area,
    gaussian_overlap,
    integrate_risk,
    pair_collision_profile,
    step_overlap,
    survival_curve,
    total_collision_profile,
)
from .scenario import (
    InitialState,
    Path,
    RoadUserType,
    Scenario,
    ScenarioParseError,
    ScenarioValidationError,
    Track,
    TrackPoint,
    extract_path,
    initial_state,
    normalize_heading,
    parse_scenario,
    read_scenarios,
    scenario_to_line,
    serialize_scenario,
    write_scenarios,
)
from .synthetic import (
    arc_track,
    chain_scenario,
    crossing_scenario,
    head_on_scenario,
    make_scenario,
    parallel_scenario,
    random_scenario,
    stationary_track,
    straight_track,
    transform_scenario,
)

__version__ = "0.1.0"
