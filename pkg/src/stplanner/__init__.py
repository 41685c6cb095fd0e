"""Interaction-aware spatio-temporal trajectory planning along a reference route.

The library plans a speed profile over a fixed path by forward tree search,
classifies interaction relations (influence / yield / overtake) against
multi-modal agent predictions, and ships a deterministic closed-loop
simulator with comparison planner variants and driving metrics.
"""

from .core import (
    AgentDescriptor,
    AgentShape,
    AvState,
    PlannerConfig,
    PoseState,
    Scenario,
    ScenarioError,
    TimedPose,
    apply_overrides,
    load_config,
    load_scenario,
    parse_scenario,
    save_scenario,
    scenario_to_dict,
)
from .frenet import (
    FrenetState,
    PathGenerationError,
    PlannedPath,
    ProjectionError,
    Route,
    compose_path,
    curvature_speed_limit,
    generate_merge_path,
    project_to_frenet,
    quintic_coefficients,
    quintic_eval,
)
from .prediction import (
    PredictedState,
    PredictedTrajectory,
    PredictionSet,
    degrade_predictions,
    predict_constant_velocity,
    predict_route_following,
)
from .interaction import (
    CheckCounters,
    EdgeCheckResult,
    InteractionZone,
    OverlapPair,
    Relation,
    build_interaction_zones,
    edge_check_interactive,
    influence_feasible,
    initial_relations,
    judge_relation_influ,
    judge_relation_pred,
    response_time,
)
from .stsearch import (
    SearchContext,
    SearchNode,
    SearchResult,
    Trajectory,
    expand_children,
    make_context,
    node_cost,
    prune,
    sampling_distance,
    search,
    terminal_cost,
)
from .baselines import (
    PlannerVariant,
    contingency_search,
    edge_check_ca,
    filter_rear_predictions,
    make_variant,
    plan_cycle,
    truncate_ls,
)
from .simloop import (
    MetricsReport,
    SimLog,
    compute_metrics,
    run_closed_loop,
)

__version__ = "0.1.0"
