"""Total-state snapshots: export, validated import, mutation, inspection.

The wire format is canonical UTF-8 JSON with a fixed field order and every
real number rendered as a fixed 9-decimal string, so equal states always
produce byte-identical documents. Import rebuilds the state from scratch
and validates physical consistency instead of trusting the document;
invalid documents are rejected with the offending field path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .core import (
    CONFIG_FIELD_NAMES,
    GameConfig,
    GameConfigError,
    GameState,
    Lifecycle,
    config_from_dict,
    config_real_fields,
    _geometry,
    _q9,
)
from .rng import SplitMix64

SCHEMA_VERSION = "toybox-breakout/1"

_STATE_FIELD_NAMES = (
    "frame",
    "score",
    "lives_remaining",
    "level",
    "bricks_alive",
    "ball_pos",
    "ball_vel",
    "ball_in_play",
    "paddle_x",
    "paddle_shrunk",
    "ball_hit_count",
    "rng_state",
    "lifecycle",
)

QUERY_SELECTORS = (
    "score",
    "lives",
    "level",
    "ball_pos",
    "ball_vel",
    "paddle_x",
    "bricks_alive",
    "brick",
    "live_brick_count",
)


class StateDocumentError(ValueError):
    """A document failed schema or invariant validation. Carries the field path."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


class SchemaVersionError(StateDocumentError):
    pass


class InterventionError(ValueError):
    """A state mutation was requested with invalid arguments."""


class UnknownSelectorError(ValueError):
    pass


def _dec9(x: float) -> str:
    """Canonical fixed-precision rendering of a real."""
    return f"{x:.9f}"


@dataclass(frozen=True)
class StateDocument:
    """A parsed canonical snapshot (config plus full game state)."""

    data: dict

    def to_text(self) -> str:
        return json.dumps(self.data, separators=(",", ":"), ensure_ascii=False)

    def to_bytes(self) -> bytes:
        return self.to_text().encode("utf-8")

    @classmethod
    def from_text(cls, text: str) -> "StateDocument":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StateDocumentError("$", f"not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise StateDocumentError("$", "document must be a JSON object")
        return cls(data)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateDocument):
            return NotImplemented
        return self.data == other.data


def export_state(state: GameState, config: GameConfig) -> StateDocument:
    """Lossless canonical snapshot of ``state`` under ``config``."""
    real_fields = config_real_fields()
    config_doc = {}
    for name in CONFIG_FIELD_NAMES:
        value = getattr(config, name)
        if name in real_fields:
            config_doc[name] = _dec9(value)
        elif name == "speedup_schedule":
            config_doc[name] = [[hits, _dec9(mult)] for hits, mult in value]
        elif name == "row_points":
            config_doc[name] = list(value)
        elif name == "row_colors":
            config_doc[name] = [list(color) for color in value]
        elif isinstance(value, tuple):
            config_doc[name] = list(value)
        else:
            config_doc[name] = value
    state_doc = {
        "frame": state.frame,
        "score": state.score,
        "lives_remaining": state.lives_remaining,
        "level": state.level,
        "bricks_alive": list(state.bricks),
        "ball_pos": [_dec9(state.ball_x), _dec9(state.ball_y)],
        "ball_vel": [_dec9(state.ball_dx), _dec9(state.ball_dy)],
        "ball_in_play": state.ball_in_play,
        "paddle_x": _dec9(state.paddle_x),
        "paddle_shrunk": state.paddle_shrunk,
        "ball_hit_count": state.ball_hit_count,
        "rng_state": state.rng.state_hex(),
        "lifecycle": state.lifecycle.value,
    }
    return StateDocument(
        {"schema_version": SCHEMA_VERSION, "config": config_doc, "state": state_doc}
    )


def _require_int(value, path: str, minimum: int | None = None) -> int:
    if type(value) is not int:
        raise StateDocumentError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise StateDocumentError(path, f"must be >= {minimum}, got {value}")
    return value


def _require_bool(value, path: str) -> bool:
    if type(value) is not bool:
        raise StateDocumentError(path, f"expected a boolean, got {value!r}")
    return value


def _require_real(value, path: str) -> float:
    if not isinstance(value, str):
        raise StateDocumentError(path, f"reals must be decimal strings, got {value!r}")
    try:
        parsed = float(value)
    except ValueError:
        raise StateDocumentError(path, f"not a decimal number: {value!r}") from None
    if not math.isfinite(parsed):
        raise StateDocumentError(path, f"must be finite, got {value!r}")
    return parsed


def _require_pair(value, path: str) -> tuple:
    if not isinstance(value, list) or len(value) != 2:
        raise StateDocumentError(path, "expected a [x, y] pair")
    return (_require_real(value[0], f"{path}[0]"), _require_real(value[1], f"{path}[1]"))


def import_state(doc: StateDocument | str) -> tuple[GameState, GameConfig]:
    """Reconstruct and validate (state, config); rejects inconsistent documents."""
    if isinstance(doc, str):
        doc = StateDocument.from_text(doc)
    data = doc.data

    unknown = set(data) - {"schema_version", "config", "state"}
    if unknown:
        raise StateDocumentError(sorted(unknown)[0], "unknown top-level field")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(
            "schema_version", f"unsupported schema {version!r}, expected {SCHEMA_VERSION!r}"
        )
    if "config" not in data or not isinstance(data["config"], dict):
        raise StateDocumentError("config", "missing or not an object")
    if "state" not in data or not isinstance(data["state"], dict):
        raise StateDocumentError("state", "missing or not an object")

    config = _parse_config(data["config"])
    state = _parse_state(data["state"], config)
    return state, config


def _parse_config(config_doc: dict) -> GameConfig:
    real_fields = config_real_fields()
    plain = {}
    for key, value in config_doc.items():
        path = f"config.{key}"
        if key in real_fields:
            plain[key] = _require_real(value, path)
        elif key == "speedup_schedule":
            if not isinstance(value, list):
                raise StateDocumentError(path, "expected a list of pairs")
            pairs = []
            for i, pair in enumerate(value):
                if not isinstance(pair, list) or len(pair) != 2:
                    raise StateDocumentError(f"{path}[{i}]", "expected [hit_count, multiplier]")
                pairs.append(
                    (
                        _require_int(pair[0], f"{path}[{i}][0]", minimum=0),
                        _require_real(pair[1], f"{path}[{i}][1]"),
                    )
                )
            plain[key] = pairs
        else:
            plain[key] = value
    try:
        return config_from_dict(plain)
    except GameConfigError as exc:
        raise StateDocumentError(f"config.{exc.field}", str(exc)) from None


def _parse_state(state_doc: dict, config: GameConfig) -> GameState:
    unknown = set(state_doc) - set(_STATE_FIELD_NAMES)
    if unknown:
        raise StateDocumentError(f"state.{sorted(unknown)[0]}", "unknown field")
    missing = set(_STATE_FIELD_NAMES) - set(state_doc)
    if missing:
        raise StateDocumentError(f"state.{sorted(missing)[0]}", "missing field")

    g = _geometry(config)

    frame = _require_int(state_doc["frame"], "state.frame", minimum=0)
    score = _require_int(state_doc["score"], "state.score", minimum=0)
    lives = _require_int(state_doc["lives_remaining"], "state.lives_remaining", minimum=0)
    level = _require_int(state_doc["level"], "state.level", minimum=1)
    hit_count = _require_int(state_doc["ball_hit_count"], "state.ball_hit_count", minimum=0)

    bricks_raw = state_doc["bricks_alive"]
    if not isinstance(bricks_raw, list) or len(bricks_raw) != g.cell_count:
        raise StateDocumentError(
            "state.bricks_alive", f"expected a list of {g.cell_count} booleans"
        )
    bricks = [_require_bool(cell, f"state.bricks_alive[{i}]") for i, cell in enumerate(bricks_raw)]
    live = sum(bricks)

    ball_x, ball_y = _require_pair(state_doc["ball_pos"], "state.ball_pos")
    ball_dx, ball_dy = _require_pair(state_doc["ball_vel"], "state.ball_vel")
    ball_in_play = _require_bool(state_doc["ball_in_play"], "state.ball_in_play")
    paddle_x = _require_real(state_doc["paddle_x"], "state.paddle_x")
    paddle_shrunk = _require_bool(state_doc["paddle_shrunk"], "state.paddle_shrunk")

    lifecycle_raw = state_doc["lifecycle"]
    try:
        lifecycle = Lifecycle(lifecycle_raw)
    except ValueError:
        raise StateDocumentError("state.lifecycle", f"unknown lifecycle {lifecycle_raw!r}") from None

    rng_raw = state_doc["rng_state"]
    if (
        not isinstance(rng_raw, str)
        or len(rng_raw) != 16
        or any(ch not in "0123456789abcdef" for ch in rng_raw)
    ):
        raise StateDocumentError("state.rng_state", "expected 16 lowercase hex characters")

    # Physical consistency checks: fail loudly rather than repair.
    if lives > config.lives:
        raise StateDocumentError("state.lives_remaining", f"exceeds config.lives ({config.lives})")
    if (lives == 0) != (lifecycle is Lifecycle.GAME_OVER):
        raise StateDocumentError(
            "state.lives_remaining", "zero lives requires GameOver lifecycle and vice versa"
        )
    if level > config.levels_to_win:
        raise StateDocumentError("state.level", f"exceeds levels_to_win ({config.levels_to_win})")
    if live == 0 and lifecycle is not Lifecycle.GAME_WON:
        raise StateDocumentError(
            "state.bricks_alive", "no live bricks: the level should have cleared"
        )
    if live > 0 and lifecycle is Lifecycle.GAME_WON:
        raise StateDocumentError("state.lifecycle", "GameWon requires an empty brick wall")

    half = g.ball_half
    if not half <= ball_x <= g.width - half:
        raise StateDocumentError("state.ball_pos[0]", "ball outside the playfield")
    if not half <= ball_y <= g.height - half:
        raise StateDocumentError("state.ball_pos[1]", "ball outside the playfield")
    paddle_half = g.paddle_half * 0.5 if paddle_shrunk else g.paddle_half
    if not paddle_half <= paddle_x <= g.width - paddle_half:
        raise StateDocumentError("state.paddle_x", "paddle outside the playfield")
    if ball_in_play:
        if ball_dx == 0.0 and ball_dy == 0.0:
            raise StateDocumentError("state.ball_vel", "ball in play must be moving")
        if lifecycle in (Lifecycle.GAME_WON, Lifecycle.GAME_OVER):
            raise StateDocumentError("state.ball_in_play", "terminal states have no ball in play")
    elif ball_dx != 0.0 or ball_dy != 0.0:
        raise StateDocumentError("state.ball_vel", "ball not in play must be at rest")

    state = GameState.__new__(GameState)
    state.frame = frame
    state.score = score
    state.lives_remaining = lives
    state.level = level
    state.bricks = bricks
    state.live_bricks = live
    state.ball_x = _q9(ball_x)
    state.ball_y = _q9(ball_y)
    state.ball_dx = _q9(ball_dx)
    state.ball_dy = _q9(ball_dy)
    state.ball_in_play = ball_in_play
    state.paddle_x = _q9(paddle_x)
    state.paddle_shrunk = paddle_shrunk
    state.ball_hit_count = hit_count
    state.rng = SplitMix64.from_state_hex(rng_raw)
    state.lifecycle = lifecycle
    return state


def set_brick(state: GameState, config: GameConfig, row: int, col: int, alive: bool) -> GameState:
    """Copy of ``state`` with exactly one brick cell changed."""
    if state.lifecycle is not Lifecycle.PLAYING:
        raise InterventionError(f"set_brick requires a Playing state, not {state.lifecycle.value}")
    if not 0 <= row < config.grid_rows:
        raise InterventionError(f"row {row} out of range 0..{config.grid_rows - 1}")
    if not 0 <= col < config.grid_cols:
        raise InterventionError(f"col {col} out of range 0..{config.grid_cols - 1}")
    new_state = state.copy()
    idx = row * config.grid_cols + col
    was_alive = new_state.bricks[idx]
    if was_alive and not alive:
        if new_state.live_bricks == 1:
            raise InterventionError(
                "cannot kill the last live brick by intervention; a Playing state needs bricks"
            )
        new_state.live_bricks -= 1
    elif alive and not was_alive:
        new_state.live_bricks += 1
    new_state.bricks[idx] = alive
    return new_state


def set_ball(
    state: GameState,
    config: GameConfig,
    pos: tuple,
    angle_deg: float,
    speed: float,
) -> GameState:
    """Copy of ``state`` with the ball in play at ``pos``.

    ``angle_deg`` is measured counterclockwise from rightward, so 90 degrees
    points straight up toward the bricks.
    """
    if state.lifecycle in (Lifecycle.GAME_WON, Lifecycle.GAME_OVER):
        raise InterventionError(f"cannot place a ball in a {state.lifecycle.value} state")
    x, y = float(pos[0]), float(pos[1])
    g = _geometry(config)
    half = g.ball_half
    if not (half <= x <= g.width - half and half <= y <= g.height - half):
        raise InterventionError(f"ball position ({x}, {y}) outside the playfield")
    if not math.isfinite(speed) or speed <= 0:
        raise InterventionError(f"ball speed must be positive, got {speed}")
    theta = math.radians(angle_deg)
    new_state = state.copy()
    new_state.ball_x = _q9(x)
    new_state.ball_y = _q9(y)
    new_state.ball_dx = _q9(speed * math.cos(theta))
    new_state.ball_dy = _q9(-speed * math.sin(theta))
    new_state.ball_in_play = True
    return new_state


def set_paddle(state: GameState, config: GameConfig, x: float) -> GameState:
    """Copy of ``state`` with the paddle centered at ``x``."""
    if state.lifecycle in (Lifecycle.GAME_WON, Lifecycle.GAME_OVER):
        raise InterventionError(f"cannot move the paddle in a {state.lifecycle.value} state")
    g = _geometry(config)
    paddle_half = g.paddle_half * 0.5 if state.paddle_shrunk else g.paddle_half
    x = float(x)
    if not paddle_half <= x <= g.width - paddle_half:
        raise InterventionError(
            f"paddle center {x} outside legal range [{paddle_half}, {g.width - paddle_half}]"
        )
    new_state = state.copy()
    new_state.paddle_x = _q9(x)
    return new_state


def query(state: GameState, config: GameConfig, selector: str, *args):
    """Read one named value from the state.

    Selectors: score, lives, level, ball_pos, ball_vel, paddle_x,
    bricks_alive, brick (takes row, col), live_brick_count.
    """
    if selector == "brick":
        if len(args) != 2:
            raise UnknownSelectorError("selector 'brick' takes (row, col)")
        row, col = args
        if not (0 <= row < config.grid_rows and 0 <= col < config.grid_cols):
            raise InterventionError(f"brick index ({row}, {col}) out of range")
        return state.bricks[row * config.grid_cols + col]
    if args:
        raise UnknownSelectorError(f"selector {selector!r} takes no arguments")
    if selector == "score":
        return state.score
    if selector == "lives":
        return state.lives_remaining
    if selector == "level":
        return state.level
    if selector == "ball_pos":
        return (state.ball_x, state.ball_y)
    if selector == "ball_vel":
        return (state.ball_dx, state.ball_dy)
    if selector == "paddle_x":
        return state.paddle_x
    if selector == "bricks_alive":
        return tuple(state.bricks)
    if selector == "live_brick_count":
        return state.live_bricks
    raise UnknownSelectorError(f"unknown selector {selector!r}")
