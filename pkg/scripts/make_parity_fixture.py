"""Generate the cross-binding parity fixture.

Runs a fixed 1,000-step action trace through the native env and freezes the
per-step (score, lives, done, reward) sequence. The TypeScript binding's
test replays the same trace over HTTP and must match byte-for-byte. The
episode resets and continues whenever it finishes, so the trace also
exercises reset-after-done.

Usage: python3 scripts/make_parity_fixture.py [output_path]
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import toybox as tb

STEPS = 1000
ENV_OPTIONS = {
    "frame_skip": 4,
    "truncate_rewards": True,
    "episode_policy": "standard",
    "seed": 123,
}


def lcg_actions(count: int, seed: int = 2024) -> list:
    actions = []
    x = seed
    for _ in range(count):
        x = (x * 1103515245 + 12345) % (1 << 31)
        actions.append(x % 4)
    return actions


def build_fixture() -> dict:
    env = tb.BreakoutEnv(**ENV_OPTIONS)
    env.reset()
    actions = lcg_actions(STEPS)
    steps = []
    for action in actions:
        _, reward, done, info = env.step(action)
        steps.append(
            {
                "score": info["score"],
                "lives": info["lives"],
                "done": done,
                "reward": reward,
            }
        )
        if done:
            env.reset()
    return {"env": ENV_OPTIONS, "actions": actions, "steps": steps}


def main() -> int:
    out = Path(
        sys.argv[1]
        if len(sys.argv) > 1
        else Path(__file__).resolve().parent.parent / "gym-binding" / "tests" / "fixtures" / "parity_trace.json"
    )
    out.parent.mkdir(parents=True, exist_ok=True)
    fixture = build_fixture()
    out.write_text(json.dumps(fixture, separators=(",", ":")) + "\n", encoding="utf-8")
    resets = sum(1 for step in fixture["steps"] if step["done"])
    print(f"wrote {out} ({STEPS} steps, {resets} episode resets)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
