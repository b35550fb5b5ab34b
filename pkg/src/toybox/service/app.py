"""FastAPI service wrapping the simulation core.

Exposes env sessions (create/reset/step/state/close) for remote agents and
language bindings, document validation, and server-side suite generation
and execution. Frames cross the boundary as base64 of the raw RGB bytes;
state documents cross as canonical UTF-8 JSON text.
"""

from __future__ import annotations

import base64

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..agents import make_agent
from ..core import ACTIONS_BY_NAME, Action, GameConfigError, config_from_dict
from ..env import BreakoutEnv, EpisodeDoneError, Observation
from ..harness import (
    case_table,
    evaluate_gate,
    generate_suite,
    render_result_files,
    run_suite,
)
from ..statedoc import StateDocumentError, import_state
from .models import (
    ActionSpaceInfo,
    AgentSpec,
    CaseModel,
    CreateEnvRequest,
    CreateEnvResponse,
    GateModel,
    GenerateSuiteRequest,
    GenerateSuiteResponse,
    ResetResponse,
    RunSuiteRequest,
    RunSuiteResponse,
    RunSuiteSummary,
    SpaceInfo,
    StateDocumentResponse,
    StateView,
    StepInfo,
    StepRequest,
    StepResponse,
    ValidateRequest,
    ValidateResponse,
)
from .sessions import Session, SessionLimitError, SessionRegistry

ACTION_NAMES_IN_ORDER = ["Noop", "Fire", "Left", "Right"]


def _state_view(observation: Observation) -> StateView:
    return StateView(**observation.state_view)


def _frame_b64(observation: Observation) -> str:
    return base64.b64encode(observation.frame.tobytes()).decode("ascii")


def _parse_action(raw) -> Action:
    if isinstance(raw, str):
        name = raw.capitalize()
        if name not in ACTIONS_BY_NAME:
            raise HTTPException(422, detail=f"unknown action name {raw!r}")
        return ACTIONS_BY_NAME[name]
    try:
        return Action(raw)
    except ValueError:
        raise HTTPException(422, detail=f"action index {raw!r} out of range 0..3") from None


def _build_agent(spec: AgentSpec, frame_skip: int, seed: int | None = None):
    params = dict(spec.params)
    if spec.name == "tracker":
        params.setdefault("frame_skip", frame_skip)
    try:
        return make_agent(spec.name, seed=spec.seed if seed is None else seed, params=params)
    except ValueError as exc:
        raise HTTPException(422, detail=str(exc)) from None


def create_app() -> FastAPI:
    app = FastAPI(
        title="toybox-breakout",
        version=__version__,
        description="Deterministic Breakout with state intervention and behavioral test suites",
    )
    registry = SessionRegistry()
    app.state.registry = registry

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__, "sessions": len(registry)}

    @app.get("/meta/actions")
    def meta_actions() -> dict:
        return {"actions": ACTION_NAMES_IN_ORDER}

    @app.post("/envs", response_model=CreateEnvResponse)
    def create_env(request: CreateEnvRequest) -> CreateEnvResponse:
        try:
            config = config_from_dict(request.config) if request.config else None
            env = BreakoutEnv(
                config=config,
                state_document=request.state_document,
                frame_skip=request.frame_skip,
                truncate_rewards=request.truncate_rewards,
                episode_policy=request.episode_policy,
                seed=request.seed,
            )
        except (GameConfigError, StateDocumentError, ValueError) as exc:
            raise HTTPException(422, detail=str(exc)) from None
        session = Session(
            env=env,
            agent_spec=request.agent.model_dump() if request.agent else None,
            render=request.render,
        )
        if request.agent:
            session.agent = _build_agent(request.agent, request.frame_skip)
        try:
            env_id = registry.create(session)
        except SessionLimitError as exc:
            raise HTTPException(409, detail=str(exc)) from None
        height, width, channels = env.observation_shape
        return CreateEnvResponse(
            env_id=env_id,
            observation_space=SpaceInfo(shape=[height, width, channels], dtype="uint8"),
            action_space=ActionSpaceInfo(n=env.num_actions, actions=ACTION_NAMES_IN_ORDER),
        )

    def _session(env_id: str) -> Session:
        try:
            return registry.get(env_id)
        except KeyError:
            raise HTTPException(404, detail=f"unknown env {env_id!r}") from None

    @app.post("/envs/{env_id}/reset", response_model=ResetResponse)
    def reset_env(env_id: str) -> ResetResponse:
        session = _session(env_id)
        with session.lock:
            observation = session.env.reset()
            session.last_observation = observation
            if session.agent_spec:
                session.agent = _build_agent(
                    AgentSpec(**session.agent_spec), session.env.frame_skip
                )
            return ResetResponse(
                state_view=_state_view(observation),
                frame_b64=_frame_b64(observation) if session.render else None,
            )

    @app.post("/envs/{env_id}/step", response_model=StepResponse)
    def step_env(env_id: str, request: StepRequest) -> StepResponse:
        session = _session(env_id)
        with session.lock:
            if request.action is not None:
                action = _parse_action(request.action)
            elif session.agent is not None:
                if session.last_observation is None:
                    raise HTTPException(409, detail="reset the env before stepping")
                action = session.agent.act(session.last_observation)
            else:
                raise HTTPException(
                    422, detail="no action given and the env has no server-side agent"
                )
            try:
                observation, reward, done, info = session.env.step(action)
            except EpisodeDoneError as exc:
                raise HTTPException(409, detail=str(exc)) from None
            except RuntimeError as exc:
                raise HTTPException(409, detail=str(exc)) from None
            session.last_observation = observation
            render = session.render if request.render is None else request.render
            return StepResponse(
                action=int(action),
                reward=reward,
                done=done,
                info=StepInfo(
                    score=info["score"],
                    lives=info["lives"],
                    frame=info["frame"],
                    events=[list(event) for event in info["events"]],
                ),
                state_view=_state_view(observation),
                frame_b64=_frame_b64(observation) if render else None,
            )

    @app.get("/envs/{env_id}/state", response_model=StateDocumentResponse)
    def export_env_state(env_id: str) -> StateDocumentResponse:
        session = _session(env_id)
        with session.lock:
            try:
                document = session.env.export_document()
            except RuntimeError as exc:
                raise HTTPException(409, detail=str(exc)) from None
            return StateDocumentResponse(document=document.to_text())

    @app.delete("/envs/{env_id}")
    def close_env(env_id: str) -> dict:
        try:
            registry.remove(env_id)
        except KeyError:
            raise HTTPException(404, detail=f"unknown env {env_id!r}") from None
        return {"closed": env_id}

    @app.post("/state/validate", response_model=ValidateResponse)
    def validate_document(request: ValidateRequest) -> ValidateResponse:
        try:
            import_state(request.document)
        except StateDocumentError as exc:
            return ValidateResponse(valid=False, error=str(exc), path=exc.path)
        return ValidateResponse(valid=True)

    @app.post("/suites/generate", response_model=GenerateSuiteResponse)
    def generate(request: GenerateSuiteRequest) -> GenerateSuiteResponse:
        try:
            config = config_from_dict(request.config) if request.config else None
            cases = generate_suite(
                request.suite, config, angles=request.angles, budget_frames=request.budget_frames
            )
        except (GameConfigError, ValueError) as exc:
            raise HTTPException(422, detail=str(exc)) from None
        return GenerateSuiteResponse(
            cases=[
                CaseModel(
                    id=case.id,
                    requirement=case.requirement,
                    start=case.start.to_text(),
                    predicate=list(case.predicate),
                    budget_frames=case.budget_frames,
                    expected_outcome=case.expected_outcome,
                    meta=case.meta,
                )
                for case in cases
            ]
        )

    @app.post("/suites/run", response_model=RunSuiteResponse)
    def run(request: RunSuiteRequest) -> RunSuiteResponse:
        try:
            config = config_from_dict(request.config) if request.config else None
            cases = generate_suite(
                request.suite, config, angles=request.angles, budget_frames=request.budget_frames
            )
        except (GameConfigError, ValueError) as exc:
            raise HTTPException(422, detail=str(exc)) from None

        def factory(seed: int):
            return _build_agent(request.agent, request.frame_skip, seed=seed)

        result = run_suite(
            cases,
            factory,
            trials=request.trials,
            base_seed=request.base_seed,
            frame_skip=request.frame_skip,
            parallel=request.parallel,
        )
        files = render_result_files(result, formats=tuple(request.formats))
        gate_model = None
        if request.gate:
            report = evaluate_gate(result, threshold=request.gate_threshold)
            gate_model = GateModel(
                passed=report.passed,
                threshold=report.threshold,
                failing_cases=list(report.failing_cases),
            )
        return RunSuiteResponse(
            summary=RunSuiteSummary(
                suite=result.suite,
                cases=len(result.cases),
                trials_per_case=result.trials_per_case,
                base_seed=result.base_seed,
                frame_skip=result.frame_skip,
                success_rate_overall=(
                    sum(c.success_rate for c in result.cases) / len(result.cases)
                ),
            ),
            case_table=case_table(result),
            files=files,
            gate=gate_model,
        )

    return app


app = create_app()
