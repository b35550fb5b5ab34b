"""Deterministic, fully parameterizable Breakout with total state export,
import, and intervention, plus a behavioral acceptance-testing harness."""

from .core import (
    ACTIONS,
    Action,
    GameConfig,
    GameConfigError,
    GameState,
    IllegalStepError,
    Lifecycle,
    StepOutcome,
    brick_value,
    config_from_dict,
    level_total_score,
    new_game,
    paddle_bounce_angle,
    step_frame,
)
from .statedoc import (
    SCHEMA_VERSION,
    InterventionError,
    SchemaVersionError,
    StateDocument,
    StateDocumentError,
    export_state,
    import_state,
    query,
    set_ball,
    set_brick,
    set_paddle,
)
from .env import BreakoutEnv, EpisodeDoneError, Observation, StepReturn, legal_actions
from .agents import RandomAgent, ReplayAgent, TrackerAgent, make_agent
from .harness import (
    DEFAULT_BUDGET_FRAMES,
    DEFAULT_TRIALS,
    SuiteResult,
    TestCase,
    TrialOutcome,
    TrialResult,
    emit_results,
    evaluate_gate,
    gen_r1_suite,
    gen_r2_suite,
    gen_r3_suite,
    generate_suite,
    run_suite,
    run_trial,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIONS",
    "Action",
    "BreakoutEnv",
    "DEFAULT_BUDGET_FRAMES",
    "DEFAULT_TRIALS",
    "EpisodeDoneError",
    "GameConfig",
    "GameConfigError",
    "GameState",
    "IllegalStepError",
    "InterventionError",
    "Lifecycle",
    "Observation",
    "RandomAgent",
    "ReplayAgent",
    "SCHEMA_VERSION",
    "SchemaVersionError",
    "StateDocument",
    "StateDocumentError",
    "StepOutcome",
    "StepReturn",
    "SuiteResult",
    "TestCase",
    "TrackerAgent",
    "TrialOutcome",
    "TrialResult",
    "brick_value",
    "config_from_dict",
    "emit_results",
    "evaluate_gate",
    "export_state",
    "gen_r1_suite",
    "gen_r2_suite",
    "gen_r3_suite",
    "generate_suite",
    "import_state",
    "legal_actions",
    "level_total_score",
    "make_agent",
    "new_game",
    "paddle_bounce_angle",
    "query",
    "run_suite",
    "run_trial",
    "set_ball",
    "set_brick",
    "set_paddle",
    "step_frame",
]
