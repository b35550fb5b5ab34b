"""Behavioral test suites over intervened start states.

Three generators build suites of start-state documents: one brick left in
isolation (R1), full wall with the ball launched at a chosen angle (R2),
and a one-brick-from-open tunnel column (R3). Trials run an agent against
a case under the shared protocol: a single life, a single level, and a
hard frame budget; dying or exhausting the budget is a failure.

Trials are embarrassingly parallel and results are independent of
scheduling: every (case, trial) pair owns a private env and agent, and
aggregation is a deterministic reduction.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

from .core import GameConfig, new_game
from .env import BreakoutEnv
from .statedoc import StateDocument, export_state, set_ball

# Four minutes of gameplay at the fixed 60 Hz time base.
DEFAULT_BUDGET_FRAMES = 4 * 60 * 60
DEFAULT_TRIALS = 30
DEFAULT_ANGLE_STEP_DEG = 15.0

REQUIREMENTS = ("R1", "R2", "R3")


class TrialOutcome(str, Enum):
    SUCCESS = "Success"
    DEATH = "Death"
    TIMEOUT = "Timeout"
    ERROR = "Error"


@dataclass(frozen=True)
class TestCase:
    """One behavioral scenario: a start document plus a success predicate.

    ``predicate`` is one of ("TargetBrickCleared", row, col),
    ("LevelCleared",) or ("ScoreAtLeast", n). ``meta`` carries the table
    key for emitted aggregates (row/col for R1 and R3, angle for R2).
    """

    id: str
    requirement: str
    start: StateDocument
    predicate: tuple
    budget_frames: int = DEFAULT_BUDGET_FRAMES
    expected_outcome: str | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.requirement not in REQUIREMENTS:
            raise ValueError(f"requirement must be one of {REQUIREMENTS}")
        if self.budget_frames <= 0:
            raise ValueError("budget_frames must be positive")
        if self.expected_outcome not in (None, "pass", "fail"):
            raise ValueError("expected_outcome must be 'pass', 'fail', or None")
        if self.predicate[0] not in ("TargetBrickCleared", "LevelCleared", "ScoreAtLeast"):
            raise ValueError(f"unknown predicate {self.predicate!r}")


@dataclass(frozen=True)
class TrialResult:
    case_id: str
    trial: int
    seed: int
    outcome: TrialOutcome
    frames_used: int
    agent_steps_used: int
    final_score: int
    error: str | None = None


@dataclass(frozen=True)
class CaseResult:
    case_id: str
    requirement: str
    meta: dict
    expected_outcome: str | None
    budget_frames: int
    trials: tuple
    success_rate: float
    median_steps: float
    reciprocal_median: float
    median_frames: float
    reciprocal_median_frames: float
    mean_score: float
    max_score: int
    median_score: float
    p25_score: float
    p75_score: float


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    trials_per_case: int
    base_seed: int
    frame_skip: int
    cases: tuple


def _single_life_state(config: GameConfig):
    state = new_game(config)
    state.lives_remaining = 1
    return state


def gen_r1_suite(
    config: GameConfig, budget_frames: int = DEFAULT_BUDGET_FRAMES
) -> list:
    """One case per brick: that brick alone on the board, serve pending."""
    config.validate()
    base = _single_life_state(config)
    cols = config.grid_cols
    cases = []
    for row in range(config.grid_rows):
        for col in range(cols):
            state = base.copy()
            state.bricks = [False] * (config.grid_rows * cols)
            state.bricks[row * cols + col] = True
            state.live_bricks = 1
            cases.append(
                TestCase(
                    id=f"r1-{row:02d}-{col:02d}",
                    requirement="R1",
                    start=export_state(state, config),
                    predicate=("TargetBrickCleared", row, col),
                    budget_frames=budget_frames,
                    meta={"row": row, "col": col},
                )
            )
    return cases


def default_r2_angles() -> list:
    return [float(a) for a in range(0, 360, int(DEFAULT_ANGLE_STEP_DEG))]


def gen_r2_suite(
    config: GameConfig,
    angles=None,
    budget_frames: int = DEFAULT_BUDGET_FRAMES,
) -> list:
    """One case per launch angle: full wall, ball already in play at the
    serve position. Exactly horizontal angles can never score and are
    annotated expected-fail."""
    config.validate()
    if angles is None:
        angles = default_r2_angles()
    if not angles:
        raise ValueError("angles must be non-empty")
    base = _single_life_state(config)
    serve_pos = (base.ball_x, base.ball_y)
    cases = []
    for angle in angles:
        angle = float(angle) % 360.0
        state = set_ball(base, config, serve_pos, angle, config.ball_speed)
        cases.append(
            TestCase(
                id=f"r2-{angle:06.2f}",
                requirement="R2",
                start=export_state(state, config),
                predicate=("LevelCleared",),
                budget_frames=budget_frames,
                expected_outcome="fail" if angle in (0.0, 180.0) else None,
                meta={"angle": angle},
            )
        )
    return cases


def gen_r3_suite(
    config: GameConfig, budget_frames: int = DEFAULT_BUDGET_FRAMES
) -> list:
    """One case per brick: a tunnel through the brick's column, nearly
    complete except for the target brick itself."""
    config.validate()
    base = _single_life_state(config)
    rows, cols = config.grid_rows, config.grid_cols
    cases = []
    for row in range(rows):
        for col in range(cols):
            state = base.copy()
            bricks = [True] * (rows * cols)
            for other_row in range(rows):
                if other_row != row:
                    bricks[other_row * cols + col] = False
            state.bricks = bricks
            state.live_bricks = rows * cols - (rows - 1)
            cases.append(
                TestCase(
                    id=f"r3-{row:02d}-{col:02d}",
                    requirement="R3",
                    start=export_state(state, config),
                    predicate=("TargetBrickCleared", row, col),
                    budget_frames=budget_frames,
                    meta={"row": row, "col": col},
                )
            )
    return cases


def generate_suite(
    name: str,
    config: GameConfig | None = None,
    angles=None,
    budget_frames: int = DEFAULT_BUDGET_FRAMES,
) -> list:
    config = config if config is not None else GameConfig()
    name = name.lower()
    if name == "r1":
        return gen_r1_suite(config, budget_frames)
    if name == "r2":
        return gen_r2_suite(config, angles, budget_frames)
    if name == "r3":
        return gen_r3_suite(config, budget_frames)
    raise ValueError(f"unknown suite {name!r}; expected r1, r2, or r3")


def _predicate_met(predicate: tuple, events: tuple, score: int) -> bool:
    kind = predicate[0]
    if kind == "TargetBrickCleared":
        _, row, col = predicate
        return any(e[0] == "BrickHit" and e[1] == row and e[2] == col for e in events)
    if kind == "LevelCleared":
        return any(e[0] == "LevelCleared" for e in events)
    return score >= predicate[1]


def run_trial(
    case: TestCase, agent, frame_skip: int = 4, seed: int = 0, trial: int = 0
) -> TrialResult:
    """Run one agent through one case under the shared trial protocol.

    The case document is imported into a single-life/single-level env,
    reseeded with the trial seed; the loop stops on predicate success, on
    death, or when the next step would exceed the frame budget. Success is
    detected from step events, so it survives the brick refill that a
    level clear triggers. An exception from the agent is recorded as an
    Error outcome, distinct from Death and Timeout.
    """
    env = BreakoutEnv(
        state_document=case.start,
        frame_skip=frame_skip,
        truncate_rewards=True,
        episode_policy="single_life_single_level",
        seed=seed,
    )
    observation = env.reset()
    budget = case.budget_frames
    steps = 0
    while env.frames_advanced + frame_skip <= budget:
        try:
            action = agent.act(observation)
        except Exception as exc:  # agent bugs must not crash the suite
            return TrialResult(
                case.id,
                trial,
                seed,
                TrialOutcome.ERROR,
                env.frames_advanced,
                steps,
                env.state.score,
                error=f"{type(exc).__name__}: {exc}",
            )
        observation, _, done, info = env.step(action)
        steps += 1
        if _predicate_met(case.predicate, info["events"], info["score"]):
            return TrialResult(
                case.id, trial, seed, TrialOutcome.SUCCESS,
                env.frames_advanced, steps, info["score"],
            )
        if done:
            died = info["lives"] == 0 or any(e[0] == "LifeLost" for e in info["events"])
            outcome = TrialOutcome.DEATH if died else TrialOutcome.TIMEOUT
            return TrialResult(
                case.id, trial, seed, outcome, env.frames_advanced, steps, info["score"]
            )
    return TrialResult(
        case.id, trial, seed, TrialOutcome.TIMEOUT, env.frames_advanced, steps, env.state.score
    )


def _percentile(values: list, q: float) -> float:
    """Linear-interpolation percentile over a sorted list (numpy 'linear')."""
    if not values:
        raise ValueError("no values")
    if len(values) == 1:
        return float(values[0])
    position = q / 100.0 * (len(values) - 1)
    lower = int(position)
    frac = position - lower
    if lower + 1 >= len(values):
        return float(values[-1])
    return values[lower] * (1.0 - frac) + values[lower + 1] * frac


def _median(values: list) -> float:
    ordered = sorted(values)
    return _percentile(ordered, 50.0)


def _aggregate_case(case: TestCase, trials: list, frame_skip: int) -> CaseResult:
    budget_steps = case.budget_frames // frame_skip
    steps_censored = sorted(
        t.agent_steps_used if t.outcome is TrialOutcome.SUCCESS else budget_steps
        for t in trials
    )
    frames_censored = sorted(
        t.frames_used if t.outcome is TrialOutcome.SUCCESS else case.budget_frames
        for t in trials
    )
    scores = sorted(t.final_score for t in trials)
    n = len(trials)
    successes = sum(1 for t in trials if t.outcome is TrialOutcome.SUCCESS)
    median_steps = _percentile(steps_censored, 50.0)
    median_frames = _percentile(frames_censored, 50.0)
    return CaseResult(
        case_id=case.id,
        requirement=case.requirement,
        meta=dict(case.meta),
        expected_outcome=case.expected_outcome,
        budget_frames=case.budget_frames,
        trials=tuple(trials),
        success_rate=successes / n,
        median_steps=median_steps,
        reciprocal_median=1.0 / median_steps if median_steps > 0 else 0.0,
        median_frames=median_frames,
        reciprocal_median_frames=1.0 / median_frames if median_frames > 0 else 0.0,
        mean_score=sum(scores) / n,
        max_score=max(scores),
        median_score=_percentile(scores, 50.0),
        p25_score=_percentile(scores, 25.0),
        p75_score=_percentile(scores, 75.0),
    )


def run_suite(
    cases,
    agent_factory,
    trials: int = DEFAULT_TRIALS,
    base_seed: int = 0,
    frame_skip: int = 4,
    parallel: int = 0,
    suite_name: str | None = None,
) -> SuiteResult:
    """Run ``trials`` independent trials of every case.

    Trial i uses seed ``base_seed + i`` for both the env's serve-side
    randomness and the agent (``agent_factory(seed)`` builds a fresh agent
    per trial). With ``parallel`` > 1 trials run on a thread pool; results
    are identical to serial execution by construction.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cases = list(cases)
    if not cases:
        raise ValueError("no cases to run")
    if suite_name is None:
        requirements = {case.requirement for case in cases}
        suite_name = requirements.pop().lower() if len(requirements) == 1 else "mixed"

    jobs = [(case, i) for case in cases for i in range(trials)]

    def one(job):
        case, i = job
        seed = base_seed + i
        agent = agent_factory(seed)
        return run_trial(case, agent, frame_skip=frame_skip, seed=seed, trial=i)

    if parallel and parallel > 1:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            flat = list(pool.map(one, jobs))
    else:
        flat = [one(job) for job in jobs]

    case_results = []
    for index, case in enumerate(cases):
        case_trials = flat[index * trials : (index + 1) * trials]
        case_results.append(_aggregate_case(case, case_trials, frame_skip))
    return SuiteResult(
        suite=suite_name,
        trials_per_case=trials,
        base_seed=base_seed,
        frame_skip=frame_skip,
        cases=tuple(case_results),
    )


# --- result emission -------------------------------------------------------

_TRIAL_COLUMNS = (
    "case_id",
    "requirement",
    "trial",
    "seed",
    "outcome",
    "frames_used",
    "agent_steps_used",
    "final_score",
    "error",
)

_CASE_COLUMNS = (
    "case_id",
    "requirement",
    "row",
    "col",
    "angle",
    "expected_outcome",
    "trials",
    "success_rate",
    "median_steps",
    "reciprocal_median",
    "median_frames",
    "reciprocal_median_frames",
    "mean_score",
    "max_score",
    "median_score",
    "p25_score",
    "p75_score",
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.9f}"
    return str(value)


def _trial_row(t: TrialResult) -> dict:
    return {
        "case_id": t.case_id,
        "requirement": t.case_id.split("-")[0].upper(),
        "trial": t.trial,
        "seed": t.seed,
        "outcome": t.outcome.value,
        "frames_used": t.frames_used,
        "agent_steps_used": t.agent_steps_used,
        "final_score": t.final_score,
        "error": t.error,
    }


def _case_row(c: CaseResult, trials_per_case: int) -> dict:
    return {
        "case_id": c.case_id,
        "requirement": c.requirement,
        "row": c.meta.get("row"),
        "col": c.meta.get("col"),
        "angle": c.meta.get("angle"),
        "expected_outcome": c.expected_outcome,
        "trials": trials_per_case,
        "success_rate": c.success_rate,
        "median_steps": c.median_steps,
        "reciprocal_median": c.reciprocal_median,
        "median_frames": c.median_frames,
        "reciprocal_median_frames": c.reciprocal_median_frames,
        "mean_score": c.mean_score,
        "max_score": c.max_score,
        "median_score": c.median_score,
        "p25_score": c.p25_score,
        "p75_score": c.p75_score,
    }


def trial_table(result: SuiteResult) -> list:
    """Raw per-trial rows across all cases, in case order."""
    return [_trial_row(t) for c in result.cases for t in c.trials]


def case_table(result: SuiteResult) -> list:
    """Per-case aggregate rows (keyed by row/col for R1 and R3, angle for R2)."""
    return [_case_row(c, result.trials_per_case) for c in result.cases]


def render_result_files(result: SuiteResult, formats=("csv", "json")) -> dict:
    """Render the emitted tables as {filename: file text}.

    Pure function of the suite result, so re-rendering is byte-identical:
    per-trial rows, the per-case aggregate table (keyed by row/col for R1
    and R3 heatmaps, by angle for R2), and a run summary.
    """
    trial_rows = trial_table(result)
    case_rows = case_table(result)
    files: dict = {}
    if "csv" in formats:
        files["trials.csv"] = _csv_text(_TRIAL_COLUMNS, trial_rows)
        files["cases.csv"] = _csv_text(_CASE_COLUMNS, case_rows)
    if "json" in formats:
        files["trials.json"] = json.dumps(trial_rows, indent=2) + "\n"
        files["cases.json"] = json.dumps(case_rows, indent=2) + "\n"
        files["summary.json"] = (
            json.dumps(
                {
                    "suite": result.suite,
                    "cases": len(result.cases),
                    "trials_per_case": result.trials_per_case,
                    "base_seed": result.base_seed,
                    "frame_skip": result.frame_skip,
                    "success_rate_overall": (
                        sum(c.success_rate for c in result.cases) / len(result.cases)
                    ),
                    "columns": {
                        "trials": list(_TRIAL_COLUMNS),
                        "cases": list(_CASE_COLUMNS),
                    },
                    "step_units": {
                        "median_steps": "agent decisions (frame_skip frames each)",
                        "median_frames": "simulator frames at 60 Hz",
                        "censoring": "non-success trials count as the full budget",
                    },
                },
                indent=2,
            )
            + "\n"
        )
    return files


def _csv_field(text: str) -> str:
    if any(ch in text for ch in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def _csv_text(columns, rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_csv_field(_fmt(row[col])) for col in columns))
    return "\n".join(lines) + "\n"


def emit_results(result: SuiteResult, out_dir, formats=("csv", "json")) -> list:
    """Write the rendered result files into ``out_dir``; returns the paths."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name, text in render_result_files(result, formats).items():
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        paths.append(path)
    return paths


@dataclass(frozen=True)
class GateReport:
    passed: bool
    threshold: float
    failing_cases: tuple


def evaluate_gate(result: SuiteResult, threshold: float = 1.0) -> GateReport:
    """Accept or reject an agent: every non-annotated case must reach the
    success-rate threshold. Cases annotated with an expected outcome are
    excluded from gating."""
    failing = tuple(
        c.case_id
        for c in result.cases
        if c.expected_outcome is None and c.success_rate < threshold
    )
    return GateReport(passed=not failing, threshold=threshold, failing_cases=failing)
