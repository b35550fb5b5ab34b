"""Episode-level environment wrapper: reset/step lifecycle, frame skip,
reward truncation, pixel observations.

One env owns one game exclusively between calls; run many envs for
parallel rollouts. Observations snapshot the state at observation time and
render their pixel frame lazily, so agents that only read the structured
view never pay for rasterization.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .core import (
    ACTIONS,
    Action,
    GameConfig,
    GameState,
    Lifecycle,
    TERMINAL_LIFECYCLES,
    new_game,
    step_frame,
)
from .render import render_frame
from .rng import SplitMix64
from .statedoc import StateDocument, export_state, import_state

EPISODE_POLICIES = ("standard", "single_life_single_level")


class EpisodeDoneError(RuntimeError):
    """Raised when stepping an episode that has already finished."""


class Observation:
    """Immutable snapshot of the game at observation time.

    ``frame`` rasterizes on first access and is cached. The structured
    view is available both as attributes and through ``query`` using the
    same selector names as the intervention module.
    """

    __slots__ = (
        "config",
        "frame_no",
        "score",
        "lives",
        "level",
        "bricks",
        "ball_x",
        "ball_y",
        "ball_dx",
        "ball_dy",
        "ball_in_play",
        "paddle_x",
        "paddle_shrunk",
        "lifecycle",
        "_frame",
    )

    def __init__(self, state: GameState, config: GameConfig) -> None:
        self.config = config
        self.frame_no = state.frame
        self.score = state.score
        self.lives = state.lives_remaining
        self.level = state.level
        self.bricks = tuple(state.bricks)
        self.ball_x = state.ball_x
        self.ball_y = state.ball_y
        self.ball_dx = state.ball_dx
        self.ball_dy = state.ball_dy
        self.ball_in_play = state.ball_in_play
        self.paddle_x = state.paddle_x
        self.paddle_shrunk = state.paddle_shrunk
        self.lifecycle = state.lifecycle
        self._frame = None

    @property
    def frame(self) -> np.ndarray:
        if self._frame is None:
            self._frame = render_frame(
                self.config,
                self.bricks,
                self.ball_x,
                self.ball_y,
                self.ball_in_play,
                self.paddle_x,
                self.paddle_shrunk,
                self.score,
                self.lives,
            )
        return self._frame

    @property
    def live_brick_count(self) -> int:
        return sum(self.bricks)

    def query(self, selector: str, *args):
        if selector == "brick":
            row, col = args
            return self.bricks[row * self.config.grid_cols + col]
        if selector == "score":
            return self.score
        if selector == "lives":
            return self.lives
        if selector == "level":
            return self.level
        if selector == "ball_pos":
            return (self.ball_x, self.ball_y)
        if selector == "ball_vel":
            return (self.ball_dx, self.ball_dy)
        if selector == "paddle_x":
            return self.paddle_x
        if selector == "bricks_alive":
            return self.bricks
        if selector == "live_brick_count":
            return self.live_brick_count
        raise ValueError(f"unknown selector {selector!r}")

    @property
    def state_view(self) -> dict:
        """JSON-friendly structured snapshot."""
        return {
            "frame": self.frame_no,
            "score": self.score,
            "lives": self.lives,
            "level": self.level,
            "ball_pos": [self.ball_x, self.ball_y],
            "ball_vel": [self.ball_dx, self.ball_dy],
            "ball_in_play": self.ball_in_play,
            "paddle_x": self.paddle_x,
            "live_brick_count": self.live_brick_count,
            "bricks_alive": list(self.bricks),
            "lifecycle": self.lifecycle.value,
        }


class StepReturn(NamedTuple):
    observation: Observation
    reward: int
    done: bool
    info: dict


def legal_actions() -> tuple:
    """The discrete action set: Noop, Fire, Left, Right."""
    return ACTIONS


class BreakoutEnv:
    """Gym-style episode wrapper over the simulation core.

    Construction knobs mirror the CLI and service options: an optional
    config, an optional state document to resume from (mutually
    exclusive with config, since documents embed theirs), frame skip,
    reward truncation, episode policy, and an rng seed that overrides the
    serve-side randomness on every reset.
    """

    def __init__(
        self,
        config: GameConfig | None = None,
        state_document: StateDocument | str | None = None,
        frame_skip: int = 4,
        truncate_rewards: bool = True,
        episode_policy: str = "standard",
        seed: int | None = None,
    ) -> None:
        if state_document is not None and config is not None:
            raise ValueError("pass either a config or a state document, not both")
        if frame_skip < 1:
            raise ValueError("frame_skip must be >= 1")
        if episode_policy not in EPISODE_POLICIES:
            raise ValueError(f"episode_policy must be one of {EPISODE_POLICIES}")
        if state_document is not None:
            self._donor, self.config = import_state(state_document)
        else:
            self.config = config if config is not None else GameConfig()
            self.config.validate()
            self._donor = None
        self.frame_skip = frame_skip
        self.truncate_rewards = truncate_rewards
        self.episode_policy = episode_policy
        self._seed = seed
        self._state: GameState | None = None
        self._done = False
        self._frames_advanced = 0

    @property
    def observation_shape(self) -> tuple:
        return (int(round(self.config.field_height)), int(round(self.config.field_width)), 3)

    @property
    def num_actions(self) -> int:
        return len(ACTIONS)

    @property
    def done(self) -> bool:
        return self._done

    @property
    def state(self) -> GameState:
        if self._state is None:
            raise RuntimeError("reset() the environment before use")
        return self._state

    @property
    def frames_advanced(self) -> int:
        """Simulator frames advanced since the last reset."""
        return self._frames_advanced

    def reset(self) -> Observation:
        if self._donor is not None:
            self._state = self._donor.copy()
        else:
            self._state = new_game(self.config)
        if self._seed is not None:
            self._state.rng = SplitMix64(self._seed)
        self._done = False
        self._frames_advanced = 0
        return Observation(self._state, self.config)

    def step(self, action) -> StepReturn:
        if self._state is None:
            raise RuntimeError("reset() the environment before stepping")
        if self._done:
            raise EpisodeDoneError("episode is done; call reset()")
        action = Action(action)
        state = self._state
        config = self.config
        single = self.episode_policy == "single_life_single_level"

        score_delta = 0
        events: list = []
        for _ in range(self.frame_skip):
            outcome = step_frame(state, action, config)
            score_delta += outcome.score_delta
            if outcome.events:
                events.extend(outcome.events)
            self._frames_advanced += 1
            lifecycle = state.lifecycle
            if lifecycle in TERMINAL_LIFECYCLES or (single and lifecycle is not Lifecycle.PLAYING):
                self._done = True
                break

        if self.truncate_rewards:
            reward = 1 if score_delta > 0 else (-1 if score_delta < 0 else 0)
        else:
            reward = score_delta
        observation = Observation(state, config)
        info = {
            "score": state.score,
            "lives": state.lives_remaining,
            "frame": state.frame,
            "events": tuple(events),
        }
        return StepReturn(observation, reward, self._done, info)

    def render(self) -> np.ndarray:
        """Current frame as uint8[height, width, 3]."""
        return Observation(self.state, self.config).frame

    def export_document(self) -> StateDocument:
        return export_state(self.state, self.config)

    def query(self, selector: str, *args):
        from .statedoc import query as _query

        return _query(self.state, self.config, selector, *args)
