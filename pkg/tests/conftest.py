"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import hashlib

import pytest

import toybox as tb
from toybox.core import Action


@pytest.fixture
def config() -> tb.GameConfig:
    return tb.GameConfig()


def lowest_live_brick(state: tb.GameState, config: tb.GameConfig) -> tuple:
    """(row, col) of a live brick with no live brick below it in its column."""
    for idx in range(len(state.bricks) - 1, -1, -1):
        if state.bricks[idx]:
            return divmod(idx, config.grid_cols)
    raise AssertionError("no live bricks")


def brick_center_x(config: tb.GameConfig, col: int) -> float:
    return (col + 0.5) * config.field_width / config.grid_cols


def step_until_event(
    state: tb.GameState,
    config: tb.GameConfig,
    event_name: str,
    max_frames: int = 500,
    action: Action = Action.NOOP,
):
    """Step with a fixed action until an event of the given name occurs."""
    for _ in range(max_frames):
        outcome = tb.step_frame(state, action, config)
        for event in outcome.events:
            if event[0] == event_name:
                return outcome
    raise AssertionError(f"no {event_name} within {max_frames} frames")


def clear_current_level(state: tb.GameState, config: tb.GameConfig) -> tb.GameState:
    """Clear every brick of the current level through physical contacts.

    Repeatedly aims the ball straight up at the lowest remaining brick via
    intervention, then steps until contact. Each brick is removed by a real
    BrickHit, so scoring and level transitions run exactly as in play.
    Returns the state after the level transition (or the won game).
    """
    launch_y = config.brick_top_y + config.grid_rows * config.brick_height + 2.0
    level = state.level
    while state.live_bricks > 0 and state.level == level:
        _, col = lowest_live_brick(state, config)
        state = tb.set_ball(
            state, config, (brick_center_x(config, col), launch_y), 90.0, config.ball_speed
        )
        step_until_event(state, config, "BrickHit", max_frames=200)
        if state.lifecycle in (tb.Lifecycle.GAME_WON, tb.Lifecycle.GAME_OVER):
            break
    return state


def rollout_digest(config: tb.GameConfig, actions) -> str:
    """SHA-256 over the stream of per-frame canonical state documents.

    The stream ends early if the game reaches a terminal lifecycle.
    """
    state = tb.new_game(config)
    digest = hashlib.sha256()
    digest.update(tb.export_state(state, config).to_bytes())
    for action in actions:
        if state.lifecycle in (tb.Lifecycle.GAME_WON, tb.Lifecycle.GAME_OVER):
            break
        tb.step_frame(state, action, config)
        digest.update(tb.export_state(state, config).to_bytes())
    return digest.hexdigest()
