"""Headless RGB rasterizer for game states.

Rendering is a pure function of (state fields, config): identical states
produce byte-identical frames. The default config renders the classic
210x160 screen. Score and remaining lives are drawn with an embedded 5x7
digit font so frames are self-contained.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from .core import GameConfig, _geometry

# 5x7 digit glyphs, one int per scanline, bit 4 = leftmost pixel.
FONT_5X7 = {
    "0": (0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110),
    "1": (0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110),
    "2": (0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111),
    "3": (0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110),
    "4": (0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010),
    "5": (0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110),
    "6": (0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110),
    "7": (0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000),
    "8": (0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110),
    "9": (0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100),
}

_DIGIT_SCALE = 2
_DIGIT_Y = 4
_SCORE_X = 8


def _draw_digits(frame: np.ndarray, text: str, x: int, y: int, color: tuple) -> None:
    height, width = frame.shape[:2]
    s = _DIGIT_SCALE
    for ch in text:
        glyph = FONT_5X7.get(ch)
        if glyph is None:
            x += 6 * s
            continue
        for gy, bits in enumerate(glyph):
            for gx in range(5):
                if bits & (1 << (4 - gx)):
                    y0, x0 = y + gy * s, x + gx * s
                    frame[max(0, y0) : min(height, y0 + s), max(0, x0) : min(width, x0 + s)] = color
        x += 6 * s


def render_frame(
    config: GameConfig,
    bricks,
    ball_x: float,
    ball_y: float,
    ball_in_play: bool,
    paddle_x: float,
    paddle_shrunk: bool,
    score: int,
    lives_remaining: int,
) -> np.ndarray:
    """Rasterize one frame as uint8[field_height, field_width, 3]."""
    g = _geometry(config)
    height = int(round(config.field_height))
    width = int(round(config.field_width))
    frame = np.empty((height, width, 3), dtype=np.uint8)
    frame[:, :] = config.background_color

    bh = config.brick_height
    bw = g.brick_w
    for row in range(config.grid_rows):
        y0 = int(round(g.band_top + row * bh))
        y1 = int(round(g.band_top + (row + 1) * bh))
        color = config.row_colors[row]
        base = row * config.grid_cols
        for col in range(config.grid_cols):
            if bricks[base + col]:
                x0 = int(round(col * bw))
                x1 = int(round((col + 1) * bw))
                frame[y0:y1, x0:x1] = color

    paddle_half = g.paddle_half * 0.5 if paddle_shrunk else g.paddle_half
    px0 = max(0, int(round(paddle_x - paddle_half)))
    px1 = min(width, int(round(paddle_x + paddle_half)))
    py0 = int(round(config.paddle_y))
    py1 = min(height, int(round(config.paddle_y + config.paddle_height)))
    frame[py0:py1, px0:px1] = config.paddle_color

    half = g.ball_half
    bx0 = max(0, int(round(ball_x - half)))
    bx1 = min(width, int(round(ball_x + half)))
    by0 = max(0, int(round(ball_y - half)))
    by1 = min(height, int(round(ball_y + half)))
    frame[by0:by1, bx0:bx1] = config.ball_color

    _draw_digits(frame, str(score), _SCORE_X, _DIGIT_Y, config.digit_color)
    lives_text = str(lives_remaining)
    lives_x = width - _SCORE_X - len(lives_text) * 6 * _DIGIT_SCALE
    _draw_digits(frame, lives_text, lives_x, _DIGIT_Y, config.digit_color)
    return frame


def write_png(path, frame: np.ndarray) -> None:
    """Write an RGB uint8 frame as a PNG using only the standard library."""
    if frame.ndim != 3 or frame.shape[2] != 3 or frame.dtype != np.uint8:
        raise ValueError("expected an uint8 array of shape (height, width, 3)")
    height, width = frame.shape[:2]
    raw = b"".join(b"\x00" + frame[y].tobytes() for y in range(height))

    def chunk(tag: bytes, payload: bytes) -> bytes:
        return (
            struct.pack(">I", len(payload))
            + tag
            + payload
            + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
        )

    header = struct.pack(">IIBBBBB", width, height, 8, 2, 0, 0, 0)
    png = (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", header)
        + chunk(b"IDAT", zlib.compress(raw, 9))
        + chunk(b"IEND", b"")
    )
    with open(path, "wb") as fh:
        fh.write(png)
