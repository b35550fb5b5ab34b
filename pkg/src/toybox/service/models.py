"""Request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field


class AgentSpec(BaseModel):
    name: str
    seed: int = 0
    params: dict = Field(default_factory=dict)


class CreateEnvRequest(BaseModel):
    config: Optional[dict] = None
    state_document: Optional[str] = None
    frame_skip: int = Field(default=4, ge=1)
    truncate_rewards: bool = True
    episode_policy: Literal["standard", "single_life_single_level"] = "standard"
    seed: Optional[int] = None
    agent: Optional[AgentSpec] = None
    render: bool = False


class SpaceInfo(BaseModel):
    shape: list[int]
    dtype: str


class ActionSpaceInfo(BaseModel):
    n: int
    actions: list[str]


class CreateEnvResponse(BaseModel):
    env_id: str
    observation_space: SpaceInfo
    action_space: ActionSpaceInfo


class StateView(BaseModel):
    frame: int
    score: int
    lives: int
    level: int
    ball_pos: list[float]
    ball_vel: list[float]
    ball_in_play: bool
    paddle_x: float
    live_brick_count: int
    bricks_alive: list[bool]
    lifecycle: str


class ResetResponse(BaseModel):
    state_view: StateView
    frame_b64: Optional[str] = None


class StepRequest(BaseModel):
    action: Optional[Union[int, str]] = None
    render: Optional[bool] = None


class StepInfo(BaseModel):
    score: int
    lives: int
    frame: int
    events: list[list]


class StepResponse(BaseModel):
    action: int
    reward: int
    done: bool
    info: StepInfo
    state_view: StateView
    frame_b64: Optional[str] = None


class StateDocumentResponse(BaseModel):
    document: str


class ValidateRequest(BaseModel):
    document: str


class ValidateResponse(BaseModel):
    valid: bool
    error: Optional[str] = None
    path: Optional[str] = None


class GenerateSuiteRequest(BaseModel):
    suite: Literal["r1", "r2", "r3"]
    config: Optional[dict] = None
    angles: Optional[list[float]] = None
    budget_frames: int = Field(default=14400, ge=1)


class CaseModel(BaseModel):
    id: str
    requirement: str
    start: str
    predicate: list
    budget_frames: int
    expected_outcome: Optional[str] = None
    meta: dict = Field(default_factory=dict)


class GenerateSuiteResponse(BaseModel):
    cases: list[CaseModel]


class RunSuiteRequest(BaseModel):
    suite: Literal["r1", "r2", "r3"]
    agent: AgentSpec
    config: Optional[dict] = None
    angles: Optional[list[float]] = None
    budget_frames: int = Field(default=14400, ge=1)
    trials: int = Field(default=30, ge=1)
    base_seed: int = 0
    frame_skip: int = Field(default=4, ge=1)
    parallel: int = Field(default=0, ge=0)
    formats: list[Literal["csv", "json"]] = Field(default_factory=lambda: ["csv", "json"])
    gate: bool = False
    gate_threshold: float = Field(default=1.0, ge=0.0, le=1.0)


class GateModel(BaseModel):
    passed: bool
    threshold: float
    failing_cases: list[str]


class RunSuiteSummary(BaseModel):
    suite: str
    cases: int
    trials_per_case: int
    base_seed: int
    frame_skip: int
    success_rate_overall: float


class RunSuiteResponse(BaseModel):
    summary: RunSuiteSummary
    case_table: list[dict]
    files: dict[str, str]
    gate: Optional[GateModel] = None
