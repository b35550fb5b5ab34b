"""Agent contract and scripted baselines.

An agent is anything with ``act(observation) -> Action``. Baselines read
the observation's structured view, never pixels: they exist to exercise
the environment and the trial protocol, not to model vision. External
policies plug in through the same contract (or through the service API).
"""

from __future__ import annotations

import random
from typing import Protocol, runtime_checkable

from .core import ACTIONS, Action
from .env import Observation


@runtime_checkable
class Agent(Protocol):
    def act(self, observation: Observation) -> Action: ...


class RandomAgent:
    """Uniform over the legal actions, deterministic per seed."""

    def __init__(self, seed: int = 0) -> None:
        self._rng = random.Random(seed)

    def act(self, observation: Observation) -> Action:
        return ACTIONS[self._rng.randrange(4)]


class TrackerAgent:
    """Serves when the ball is waiting, then keeps the paddle under the
    point where the ball will cross the paddle line.

    While the ball descends, its crossing x is projected by folding the
    straight-line path at the side walls; while it ascends, the current x
    is tracked. The deadzone is half the paddle's travel per decision
    (paddle_speed x frame_skip / 2), which stops the paddle from
    oscillating around its target between decisions.
    """

    def __init__(self, deadzone: float | None = None, frame_skip: int = 4) -> None:
        self.deadzone = deadzone
        self.frame_skip = frame_skip

    def act(self, observation: Observation) -> Action:
        if not observation.ball_in_play:
            return Action.FIRE
        config = observation.config
        target = observation.ball_x
        dy = observation.ball_dy
        half = config.ball_size / 2.0
        face = config.paddle_y - half
        if dy > 0.0 and observation.ball_y < face:
            crossing = observation.ball_x + observation.ball_dx * (face - observation.ball_y) / dy
            low = half
            high = config.field_width - half
            period = 2.0 * (high - low)
            folded = (crossing - low) % period
            target = low + (folded if folded <= high - low else period - folded)
        deadzone = self.deadzone
        if deadzone is None:
            deadzone = config.paddle_speed * self.frame_skip / 2.0
        offset = target - observation.paddle_x
        if offset < -deadzone:
            return Action.LEFT
        if offset > deadzone:
            return Action.RIGHT
        return Action.NOOP


class ReplayAgent:
    """Plays back a fixed action trace, then holds Noop forever."""

    def __init__(self, trace=()) -> None:
        self.trace = tuple(Action(a) for a in trace)
        self._cursor = 0

    def act(self, observation: Observation) -> Action:
        if self._cursor < len(self.trace):
            action = self.trace[self._cursor]
            self._cursor += 1
            return action
        return Action.NOOP

    def reset(self) -> None:
        self._cursor = 0


def random_agent(seed: int = 0) -> RandomAgent:
    return RandomAgent(seed)


def tracker_agent(deadzone: float | None = None, frame_skip: int = 4) -> TrackerAgent:
    return TrackerAgent(deadzone, frame_skip)


def replay_agent(trace) -> ReplayAgent:
    if not trace:
        raise ValueError("replay trace must be non-empty")
    return ReplayAgent(trace)


AGENT_NAMES = ("random", "tracker", "replay")


def make_agent(name: str, seed: int = 0, params: dict | None = None):
    """Build a named baseline agent. ``params`` carries agent-specific options.

    random: no params. tracker: optional ``deadzone``. replay: ``trace``
    (list of action indices or names).
    """
    params = dict(params or {})
    if name == "random":
        agent = RandomAgent(seed)
    elif name == "tracker":
        agent = TrackerAgent(params.pop("deadzone", None), params.pop("frame_skip", 4))
    elif name == "replay":
        trace = params.pop("trace", None)
        if trace is None:
            raise ValueError("replay agent needs a 'trace' parameter")
        trace = [
            Action[a.upper()] if isinstance(a, str) else Action(a) for a in trace
        ]
        agent = replay_agent(trace)
    else:
        raise ValueError(f"unknown agent {name!r}; known agents: {', '.join(AGENT_NAMES)}")
    if params:
        raise ValueError(f"unknown parameters for agent {name!r}: {sorted(params)}")
    return agent
