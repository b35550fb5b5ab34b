"""Deterministic frame-by-frame Breakout simulation.

The playfield uses continuous coordinates: origin at the top-left, x to the
right, y increasing downward, one logical unit per pixel. The ball is an
axis-aligned square addressed by its center; collisions are resolved by
swept tests in sub-frame order of first contact, so trajectories replay
bit-for-bit for any configuration and action sequence.

All state reals are quantized to 9 decimal digits at the end of every frame
(and whenever a velocity is created from an angle). This puts the whole
simulation on a decimal grid: snapshots serialize losslessly as fixed-
precision decimal strings, and libm differences between platforms (sin/cos
low bits) are absorbed by the quantization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields as dataclass_fields
from enum import Enum, IntEnum
from functools import lru_cache

from .rng import SplitMix64

# Outgoing paddle deflection is clamped to this many degrees off vertical.
MAX_BOUNCE_DEG = 60.0

# Classic row palette, top row first.
DEFAULT_ROW_COLORS = (
    (200, 72, 72),
    (198, 108, 58),
    (180, 122, 48),
    (162, 162, 42),
    (72, 160, 72),
    (66, 72, 200),
)


class GameConfigError(ValueError):
    """A configuration value violates its invariant. Carries the field name."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class IllegalStepError(RuntimeError):
    """Raised when stepping a state whose game has already ended."""


class Action(IntEnum):
    NOOP = 0
    FIRE = 1
    LEFT = 2
    RIGHT = 3


ACTIONS = (Action.NOOP, Action.FIRE, Action.LEFT, Action.RIGHT)

ACTION_NAMES = {
    Action.NOOP: "Noop",
    Action.FIRE: "Fire",
    Action.LEFT: "Left",
    Action.RIGHT: "Right",
}

ACTIONS_BY_NAME = {name: action for action, name in ACTION_NAMES.items()}


class Lifecycle(str, Enum):
    PLAYING = "Playing"
    LIFE_LOST = "LifeLost"          # transient: a life was lost this frame, more remain
    LEVEL_CLEARED = "LevelCleared"  # transient: a level was cleared this frame, more remain
    GAME_WON = "GameWon"
    GAME_OVER = "GameOver"


TERMINAL_LIFECYCLES = (Lifecycle.GAME_WON, Lifecycle.GAME_OVER)


@dataclass(frozen=True)
class GameConfig:
    """Every tunable parameter of the game.

    Geometric quantities are logical units (pixels at the default scale).
    ``row_points`` and ``row_colors`` are indexed top row first.
    """

    grid_cols: int = 18
    grid_rows: int = 6
    row_points: tuple = (7, 7, 4, 4, 1, 1)
    field_width: float = 160.0
    field_height: float = 210.0
    brick_top_y: float = 57.0
    brick_height: float = 6.0
    paddle_width: float = 24.0
    paddle_height: float = 4.0
    paddle_y: float = 189.0
    paddle_speed: float = 4.0
    ball_size: float = 2.0
    ball_speed: float = 2.0
    speedup_schedule: tuple = ()
    default_launch_angle_deg: float = 60.0
    shrink_paddle_on_ceiling: bool = False
    lives: int = 5
    levels_to_win: int = 2
    frames_per_second: int = 60
    rng_seed: int = 0
    row_colors: tuple = DEFAULT_ROW_COLORS
    background_color: tuple = (0, 0, 0)
    paddle_color: tuple = (200, 72, 72)
    ball_color: tuple = (200, 72, 72)
    digit_color: tuple = (142, 142, 142)

    def validate(self) -> None:
        """Raise GameConfigError naming the offending field if any invariant fails."""
        if self.grid_cols < 1:
            raise GameConfigError("grid_cols", "must be >= 1")
        if self.grid_rows < 1:
            raise GameConfigError("grid_rows", "must be >= 1")
        if len(self.row_points) != self.grid_rows:
            raise GameConfigError(
                "row_points",
                f"length {len(self.row_points)} != grid_rows {self.grid_rows}",
            )
        for i, points in enumerate(self.row_points):
            if not isinstance(points, int) or points < 0:
                raise GameConfigError(f"row_points[{i}]", "must be a non-negative integer")
        for name in (
            "field_width",
            "field_height",
            "brick_top_y",
            "brick_height",
            "paddle_width",
            "paddle_height",
            "paddle_y",
            "ball_size",
            "ball_speed",
        ):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise GameConfigError(name, "must be positive and finite")
        if not math.isfinite(self.paddle_speed) or self.paddle_speed < 0:
            raise GameConfigError("paddle_speed", "must be non-negative and finite")
        if self.paddle_y + self.paddle_height > self.field_height:
            raise GameConfigError("paddle_y", "paddle must fit inside field_height")
        if self.brick_top_y + self.grid_rows * self.brick_height > self.paddle_y:
            raise GameConfigError("brick_top_y", "brick region must sit above paddle_y")
        if self.paddle_width >= self.field_width:
            raise GameConfigError("paddle_width", "must be narrower than the field")
        if self.ball_size >= self.field_width or self.ball_size >= self.field_height:
            raise GameConfigError("ball_size", "must fit inside the field")
        if not 0.0 < self.default_launch_angle_deg <= 90.0:
            raise GameConfigError("default_launch_angle_deg", "must be in (0, 90]")
        previous = -1
        for i, pair in enumerate(self.speedup_schedule):
            if len(pair) != 2:
                raise GameConfigError(f"speedup_schedule[{i}]", "must be a (hit_count, multiplier) pair")
            hits, mult = pair
            if not isinstance(hits, int) or hits <= previous:
                raise GameConfigError(
                    f"speedup_schedule[{i}]", "hit counts must be strictly increasing integers"
                )
            if not math.isfinite(mult) or mult <= 0:
                raise GameConfigError(f"speedup_schedule[{i}]", "multiplier must be positive")
            previous = hits
        if self.lives < 1:
            raise GameConfigError("lives", "must be >= 1")
        if self.levels_to_win < 1:
            raise GameConfigError("levels_to_win", "must be >= 1")
        if self.frames_per_second != 60:
            raise GameConfigError("frames_per_second", "time base is fixed at 60")
        if len(self.row_colors) != self.grid_rows:
            raise GameConfigError(
                "row_colors",
                f"length {len(self.row_colors)} != grid_rows {self.grid_rows}",
            )
        for name in ("row_colors", "background_color", "paddle_color", "ball_color", "digit_color"):
            value = getattr(self, name)
            flat = value if name != "row_colors" else [ch for color in value for ch in color]
            if name != "row_colors" and len(value) != 3:
                raise GameConfigError(name, "must be an (r, g, b) triple")
            if name == "row_colors" and any(len(color) != 3 for color in value):
                raise GameConfigError(name, "each entry must be an (r, g, b) triple")
            if any(not isinstance(ch, int) or not 0 <= ch <= 255 for ch in flat):
                raise GameConfigError(name, "channels must be integers in 0..255")


CONFIG_FIELD_NAMES = tuple(f.name for f in dataclass_fields(GameConfig))

_CONFIG_REAL_FIELDS = frozenset(
    {
        "field_width",
        "field_height",
        "brick_top_y",
        "brick_height",
        "paddle_width",
        "paddle_height",
        "paddle_y",
        "paddle_speed",
        "ball_size",
        "ball_speed",
        "default_launch_angle_deg",
    }
)


def config_real_fields() -> frozenset:
    return _CONFIG_REAL_FIELDS


def config_from_dict(data: dict) -> GameConfig:
    """Build and validate a GameConfig from a plain dict (e.g. parsed JSON).

    Missing fields take their defaults; unknown fields are rejected. Lists
    are coerced to tuples so the result stays hashable.
    """
    kwargs = {}
    for key, value in data.items():
        if key not in CONFIG_FIELD_NAMES:
            raise GameConfigError(key, "unknown configuration field")
        if key == "row_points":
            value = tuple(value)
        elif key == "speedup_schedule":
            value = tuple((int(hits), float(mult)) for hits, mult in value)
        elif key == "row_colors":
            value = tuple(tuple(color) for color in value)
        elif key in ("background_color", "paddle_color", "ball_color", "digit_color"):
            value = tuple(value)
        elif key in _CONFIG_REAL_FIELDS:
            value = float(value)
        kwargs[key] = value
    config = GameConfig(**kwargs)
    config.validate()
    return config


class _Geometry:
    """Precomputed collision geometry for one config."""

    __slots__ = (
        "width",
        "height",
        "ball_half",
        "paddle_half",
        "paddle_top",
        "serve_y",
        "brick_w",
        "band_top",
        "band_bot",
        "rows",
        "cols",
        "cell_count",
    )

    def __init__(self, config: GameConfig) -> None:
        self.width = config.field_width
        self.height = config.field_height
        self.ball_half = config.ball_size / 2.0
        self.paddle_half = config.paddle_width / 2.0
        self.paddle_top = config.paddle_y
        self.serve_y = _q9(config.paddle_y - self.ball_half - 1.0)
        self.brick_w = config.field_width / config.grid_cols
        self.band_top = config.brick_top_y
        self.band_bot = config.brick_top_y + config.grid_rows * config.brick_height
        self.rows = config.grid_rows
        self.cols = config.grid_cols
        self.cell_count = config.grid_rows * config.grid_cols


@lru_cache(maxsize=64)
def _geometry(config: GameConfig) -> _Geometry:
    return _Geometry(config)


def _q9(x: float) -> float:
    """Quantize to the 1e-9 decimal grid (normalizing -0.0 to 0.0)."""
    return round(x, 9) + 0.0


def speed_multiplier(schedule: tuple, hit_count: int) -> float:
    """Current speed multiplier: the entry with the largest threshold <= hit_count."""
    mult = 1.0
    for threshold, value in schedule:
        if hit_count >= threshold:
            mult = value
        else:
            break
    return mult


class GameState:
    """Complete mutable world state. Positions are ball/paddle centers."""

    __slots__ = (
        "frame",
        "score",
        "lives_remaining",
        "level",
        "bricks",
        "live_bricks",
        "ball_x",
        "ball_y",
        "ball_dx",
        "ball_dy",
        "ball_in_play",
        "paddle_x",
        "paddle_shrunk",
        "ball_hit_count",
        "rng",
        "lifecycle",
    )

    frame: int
    score: int
    lives_remaining: int
    level: int
    bricks: list  # row-major booleans, length grid_rows * grid_cols
    live_bricks: int
    ball_x: float
    ball_y: float
    ball_dx: float
    ball_dy: float
    ball_in_play: bool
    paddle_x: float
    paddle_shrunk: bool
    ball_hit_count: int
    rng: SplitMix64
    lifecycle: Lifecycle

    def copy(self) -> "GameState":
        other = GameState.__new__(GameState)
        other.frame = self.frame
        other.score = self.score
        other.lives_remaining = self.lives_remaining
        other.level = self.level
        other.bricks = list(self.bricks)
        other.live_bricks = self.live_bricks
        other.ball_x = self.ball_x
        other.ball_y = self.ball_y
        other.ball_dx = self.ball_dx
        other.ball_dy = self.ball_dy
        other.ball_in_play = self.ball_in_play
        other.paddle_x = self.paddle_x
        other.paddle_shrunk = self.paddle_shrunk
        other.ball_hit_count = self.ball_hit_count
        other.rng = self.rng.copy()
        other.lifecycle = self.lifecycle
        return other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GameState):
            return NotImplemented
        return all(getattr(self, name) == getattr(other, name) for name in GameState.__slots__)

    def __repr__(self) -> str:
        return (
            f"GameState(frame={self.frame}, score={self.score}, lives={self.lives_remaining}, "
            f"level={self.level}, live_bricks={self.live_bricks}, "
            f"ball=({self.ball_x}, {self.ball_y}) v=({self.ball_dx}, {self.ball_dy}) "
            f"in_play={self.ball_in_play}, paddle_x={self.paddle_x}, "
            f"lifecycle={self.lifecycle.value})"
        )


class StepOutcome:
    """What one frame produced: points, events, and the post-frame lifecycle."""

    __slots__ = ("score_delta", "events", "lifecycle")

    def __init__(self, score_delta: int, events: tuple, lifecycle: Lifecycle) -> None:
        self.score_delta = score_delta
        self.events = events
        self.lifecycle = lifecycle

    def __repr__(self) -> str:
        return f"StepOutcome(score_delta={self.score_delta}, events={self.events}, lifecycle={self.lifecycle.value})"


def new_game(config: GameConfig) -> GameState:
    """Fresh state: full wall, score 0, ball waiting to be served."""
    config.validate()
    g = _geometry(config)
    state = GameState.__new__(GameState)
    state.frame = 0
    state.score = 0
    state.lives_remaining = config.lives
    state.level = 1
    state.bricks = [True] * g.cell_count
    state.live_bricks = g.cell_count
    state.paddle_x = _q9(config.field_width / 2.0)
    state.paddle_shrunk = False
    state.ball_x = state.paddle_x
    state.ball_y = g.serve_y
    state.ball_dx = 0.0
    state.ball_dy = 0.0
    state.ball_in_play = False
    state.ball_hit_count = 0
    state.rng = SplitMix64(config.rng_seed)
    state.lifecycle = Lifecycle.PLAYING
    return state


def brick_value(config: GameConfig, row: int) -> int:
    """Point value of a brick in ``row`` (0 = top)."""
    if not 0 <= row < config.grid_rows:
        raise ValueError(f"row {row} out of range 0..{config.grid_rows - 1}")
    return config.row_points[row]


def level_total_score(config: GameConfig) -> int:
    """Points from clearing every brick of one level."""
    return config.grid_cols * sum(config.row_points)


def paddle_bounce_angle(hit_offset: float, paddle_half_width: float) -> float:
    """Outgoing ball direction in degrees off vertical for a paddle contact.

    Zero at the paddle center, linear in the offset, +/-MAX_BOUNCE_DEG at the
    paddle edges. Positive offsets (right of center) deflect right. The
    vertical component of the outgoing velocity is always upward.
    """
    if abs(hit_offset) > paddle_half_width:
        raise ValueError(
            f"hit_offset {hit_offset} outside paddle half-width {paddle_half_width}"
        )
    angle = MAX_BOUNCE_DEG * (hit_offset / paddle_half_width)
    return max(-MAX_BOUNCE_DEG, min(MAX_BOUNCE_DEG, angle))


def _serve(state: GameState, config: GameConfig, g: _Geometry) -> None:
    """Launch the ball from above the paddle center. Side comes from the rng."""
    side = 1.0 if state.rng.next_bit() else -1.0
    speed = config.ball_speed * speed_multiplier(config.speedup_schedule, state.ball_hit_count)
    angle = math.radians(config.default_launch_angle_deg)
    state.ball_x = state.paddle_x
    state.ball_y = g.serve_y
    state.ball_dx = _q9(side * speed * math.cos(angle))
    state.ball_dy = _q9(-speed * math.sin(angle))
    state.ball_in_play = True


def _rest_ball(state: GameState, g: _Geometry) -> None:
    state.ball_x = state.paddle_x
    state.ball_y = g.serve_y
    state.ball_dx = 0.0
    state.ball_dy = 0.0
    state.ball_in_play = False


# Sweep contact kinds, in tie-break priority order (lower wins at equal time).
_K_BOTTOM = 0
_K_PADDLE = 1
_K_BRICK = 2
_K_LEFT = 3
_K_RIGHT = 4
_K_CEILING = 5


def step_frame(state: GameState, action: Action, config: GameConfig) -> StepOutcome:
    """Advance exactly one frame at the 60 Hz time base.

    Applies paddle motion, then the serve or the swept ball integration,
    resolving collisions in order of first contact. Raises IllegalStepError
    for states whose game has ended.
    """
    lifecycle = state.lifecycle
    if lifecycle is Lifecycle.GAME_WON or lifecycle is Lifecycle.GAME_OVER:
        raise IllegalStepError(f"cannot step a {lifecycle.value} state")
    if lifecycle is not Lifecycle.PLAYING:
        state.lifecycle = Lifecycle.PLAYING

    g = _geometry(config)
    state.frame += 1

    half = g.ball_half
    paddle_half = g.paddle_half * 0.5 if state.paddle_shrunk else g.paddle_half

    px = state.paddle_x
    if action == Action.LEFT:
        px -= config.paddle_speed
        if px < paddle_half:
            px = paddle_half
        px = _q9(px)
    elif action == Action.RIGHT:
        px += config.paddle_speed
        limit = g.width - paddle_half
        if px > limit:
            px = limit
        px = _q9(px)
    state.paddle_x = px

    if not state.ball_in_play:
        if action == Action.FIRE:
            _serve(state, config, g)
        else:
            state.ball_x = px
            state.ball_y = g.serve_y
            return StepOutcome(0, (), state.lifecycle)

    cx = state.ball_x
    cy = state.ball_y
    dx = state.ball_dx
    dy = state.ball_dy

    events: list = []
    score_delta = 0
    t_rem = 1.0
    schedule = config.speedup_schedule

    for _ in range(24):
        best_t = t_rem
        best_kind = -1
        best_row = -1
        best_col = -1
        best_vertical_face = False

        # Bottom exit (life loss) when the ball's lower edge reaches the floor.
        if dy > 0.0:
            t = (g.height - half - cy) / dy
            if 0.0 <= t < best_t:
                best_t = t
                best_kind = _K_BOTTOM

        # Paddle: top surface only, while the ball descends from above it.
        if dy > 0.0:
            face = g.paddle_top - half
            if cy <= face:
                t = (face - cy) / dy
                if 0.0 <= t < best_t and abs(cx + dx * t - px) <= paddle_half + half:
                    best_t = t
                    best_kind = _K_PADDLE

        # Bricks: swept-box candidates, earliest contact, (row, col) tie-break.
        if state.live_bricks:
            x_far = cx + dx * t_rem
            y_far = cy + dy * t_rem
            y_lo = (cy if cy < y_far else y_far) - half
            y_hi = (cy if cy > y_far else y_far) + half
            if y_hi >= g.band_top and y_lo < g.band_bot:
                x_lo = (cx if cx < x_far else x_far) - half
                x_hi = (cx if cx > x_far else x_far) + half
                bh = config.brick_height
                bw = g.brick_w
                r0 = int((y_lo - g.band_top) / bh)
                if r0 < 0:
                    r0 = 0
                r1 = int((y_hi - g.band_top) / bh)
                if r1 > g.rows - 1:
                    r1 = g.rows - 1
                c0 = int(x_lo / bw)
                if c0 < 0:
                    c0 = 0
                c1 = int(x_hi / bw)
                if c1 > g.cols - 1:
                    c1 = g.cols - 1
                bricks = state.bricks
                for r in range(r0, r1 + 1):
                    base = r * g.cols
                    ey0 = g.band_top + r * bh - half
                    ey1 = ey0 + bh + half + half
                    for c in range(c0, c1 + 1):
                        if not bricks[base + c]:
                            continue
                        ex0 = c * bw - half
                        ex1 = ex0 + bw + half + half
                        if dx > 0.0:
                            tex = (ex0 - cx) / dx
                            txx = (ex1 - cx) / dx
                        elif dx < 0.0:
                            tex = (ex1 - cx) / dx
                            txx = (ex0 - cx) / dx
                        elif ex0 < cx < ex1:
                            tex = -math.inf
                            txx = math.inf
                        else:
                            continue
                        if dy > 0.0:
                            tey = (ey0 - cy) / dy
                            tyy = (ey1 - cy) / dy
                        elif dy < 0.0:
                            tey = (ey1 - cy) / dy
                            tyy = (ey0 - cy) / dy
                        elif ey0 < cy < ey1:
                            tey = -math.inf
                            tyy = math.inf
                        else:
                            continue
                        t_enter = tex if tex > tey else tey
                        t_exit = txx if txx < tyy else tyy
                        if t_enter > t_exit or t_exit <= 0.0:
                            continue
                        t_hit = t_enter if t_enter > 0.0 else 0.0
                        if t_hit < best_t or (
                            t_hit == best_t
                            and best_kind == _K_BRICK
                            and (r, c) < (best_row, best_col)
                        ):
                            best_t = t_hit
                            best_kind = _K_BRICK
                            best_row = r
                            best_col = c
                            best_vertical_face = tex > tey

        if dx < 0.0:
            t = (half - cx) / dx
            if 0.0 <= t < best_t:
                best_t = t
                best_kind = _K_LEFT
        elif dx > 0.0:
            t = (g.width - half - cx) / dx
            if 0.0 <= t < best_t:
                best_t = t
                best_kind = _K_RIGHT

        if dy < 0.0:
            t = (half - cy) / dy
            if 0.0 <= t < best_t:
                best_t = t
                best_kind = _K_CEILING

        if best_kind < 0:
            cx += dx * t_rem
            cy += dy * t_rem
            break

        cx += dx * best_t
        cy += dy * best_t
        t_rem -= best_t

        if best_kind == _K_BOTTOM:
            state.lives_remaining -= 1
            state.ball_hit_count = 0
            state.paddle_shrunk = False
            events.append(("LifeLost",))
            _rest_ball(state, g)
            state.lifecycle = (
                Lifecycle.GAME_OVER if state.lives_remaining <= 0 else Lifecycle.LIFE_LOST
            )
            return _finish_frame(state, score_delta, events)

        if best_kind == _K_BRICK:
            idx = best_row * g.cols + best_col
            state.bricks[idx] = False
            state.live_bricks -= 1
            score_delta += config.row_points[best_row]
            events.append(("BrickHit", best_row, best_col))
            if state.live_bricks == 0:
                events.append(("LevelCleared",))
                if state.level >= config.levels_to_win:
                    events.append(("GameWon",))
                    state.lifecycle = Lifecycle.GAME_WON
                    _rest_ball(state, g)
                else:
                    state.level += 1
                    state.bricks = [True] * g.cell_count
                    state.live_bricks = g.cell_count
                    state.lifecycle = Lifecycle.LEVEL_CLEARED
                    _rest_ball(state, g)
                return _finish_frame(state, score_delta, events)
            if best_vertical_face:
                dx = -dx
            else:
                dy = -dy
            continue

        if best_kind == _K_PADDLE:
            speed = math.hypot(dx, dy)
            offset = cx - px
            if offset > paddle_half:
                offset = paddle_half
            elif offset < -paddle_half:
                offset = -paddle_half
            theta = math.radians(paddle_bounce_angle(offset, paddle_half))
            dx = _q9(speed * math.sin(theta))
            dy = _q9(-speed * math.cos(theta))
            events.append(("PaddleHit",))
        elif best_kind == _K_LEFT or best_kind == _K_RIGHT:
            dx = -dx
            events.append(("WallHit",))
        else:  # _K_CEILING
            dy = -dy
            events.append(("CeilingHit",))
            if config.shrink_paddle_on_ceiling and not state.paddle_shrunk:
                state.paddle_shrunk = True
                paddle_half = g.paddle_half * 0.5

        state.ball_hit_count += 1
        if schedule:
            target = config.ball_speed * speed_multiplier(schedule, state.ball_hit_count)
            current = math.hypot(dx, dy)
            if current > 0.0 and abs(current - target) > 1e-12:
                scale = target / current
                dx *= scale
                dy *= scale
    else:
        raise AssertionError("collision resolution did not converge within 24 contacts")

    state.ball_x = _q9(cx)
    state.ball_y = _q9(cy)
    state.ball_dx = _q9(dx)
    state.ball_dy = _q9(dy)
    return _finish_frame(state, score_delta, events)


def _finish_frame(state: GameState, score_delta: int, events: list) -> StepOutcome:
    state.score += score_delta
    if len(events) > 1:
        seen = set()
        unique = []
        for event in events:
            if event not in seen:
                seen.add(event)
                unique.append(event)
        events = unique
    return StepOutcome(score_delta, tuple(events), state.lifecycle)
