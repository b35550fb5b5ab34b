/**
 * Binding acceptance: a fixed 1,000-step action trace through the binding
 * must reproduce the native (score, lives, done) sequence exactly, the
 * observation space must be 210x160x3, and environments must be
 * constructible by id string.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, test } from "vitest";

import { make } from "../src/index.js";
import type { EnvOptions } from "../src/index.js";
import { type RunningServer, startServer } from "./server.js";

interface FixtureStep {
  score: number;
  lives: number;
  done: boolean;
  reward: number;
}

interface Fixture {
  env: {
    frame_skip: number;
    truncate_rewards: boolean;
    episode_policy: "standard" | "single_life_single_level";
    seed: number;
  };
  actions: number[];
  steps: FixtureStep[];
}

const here = dirname(fileURLToPath(import.meta.url));
const fixture: Fixture = JSON.parse(readFileSync(join(here, "fixtures", "parity_trace.json"), "utf-8"));

let server: RunningServer;

beforeAll(async () => {
  server = await startServer();
}, 40_000);

afterAll(() => {
  server?.stop();
});

function envOptions(overrides: Partial<EnvOptions> = {}): EnvOptions {
  return {
    server: server.url,
    frameSkip: fixture.env.frame_skip,
    truncateRewards: fixture.env.truncate_rewards,
    episodePolicy: fixture.env.episode_policy,
    seed: fixture.env.seed,
    ...overrides,
  };
}

describe("binding parity with the native env", () => {
  test("observation and action spaces match the contract", async () => {
    const env = await make("ToyboxBreakout-v0", envOptions());
    expect(env.observationSpace.shape).toEqual([210, 160, 3]);
    expect(env.observationSpace.dtype).toBe("uint8");
    expect(env.actionSpace.n).toBe(4);
    expect(env.actionSpace.actions).toEqual(["Noop", "Fire", "Left", "Right"]);
    await env.close();
  });

  test(
    "the 1,000-step fixture trace reproduces (score, lives, done, reward) exactly",
    async () => {
      const env = await make("ToyboxBreakout-v0", envOptions());
      await env.reset();
      const got: FixtureStep[] = [];
      for (const action of fixture.actions) {
        const [, reward, done, info] = await env.step(action);
        got.push({ score: info.score, lives: info.lives, done, reward });
        if (done) {
          await env.reset();
        }
      }
      expect(got).toEqual(fixture.steps);
      await env.close();
    },
    120_000,
  );

  test("rewards over random play stay in {0, +1}", () => {
    const rewards = new Set(fixture.steps.map((step) => step.reward));
    for (const reward of rewards) {
      expect([0, 1]).toContain(reward);
    }
  });

  test("rendered frames arrive as contiguous RGB bytes", async () => {
    const env = await make("ToyboxBreakout-v0", envOptions({ render: true }));
    const observation = await env.reset();
    expect(observation.frame).toBeDefined();
    expect(observation.frame!.byteLength).toBe(210 * 160 * 3);
    const [next] = await env.step(1);
    expect(next.frame!.byteLength).toBe(210 * 160 * 3);
    await env.close();
  });

  test("two resets with the same seed observe identical frames", async () => {
    const env = await make("ToyboxBreakout-v0", envOptions({ render: true }));
    const first = await env.reset();
    await env.step(1);
    const second = await env.reset();
    expect(Buffer.from(second.frame!).equals(Buffer.from(first.frame!))).toBe(true);
    await env.close();
  });

  test("state documents cross the boundary as canonical text", async () => {
    const env = await make("ToyboxBreakout-v0", envOptions());
    await env.reset();
    await env.step(1);
    const document = await env.exportState();
    const parsed = JSON.parse(document);
    expect(parsed.schema_version).toBe("toybox-breakout/1");
    expect(parsed.state.frame).toBe(fixture.env.frame_skip);

    // an env resumed from the export continues from the same state
    const resumed = await make("ToyboxBreakout-v0", envOptions({ stateDocument: document }));
    const observation = await resumed.reset();
    expect(observation.stateView.frame).toBe(fixture.env.frame_skip);
    await resumed.close();
    await env.close();
  });

  test("a one-brick intervened document shows through the binding", async () => {
    const env = await make("ToyboxBreakout-v0", envOptions());
    await env.reset();
    const document = JSON.parse(await env.exportState());
    document.state.bricks_alive = document.state.bricks_alive.map(() => false);
    document.state.bricks_alive[40] = true;
    const intervened = await make(
      "ToyboxBreakout-v0",
      envOptions({ stateDocument: JSON.stringify(document) }),
    );
    const observation = await intervened.reset();
    expect(observation.stateView.live_brick_count).toBe(1);
    await intervened.close();
    await env.close();
  });

  test("operations after close are rejected", async () => {
    const env = await make("ToyboxBreakout-v0", envOptions());
    await env.reset();
    await env.close();
    await expect(env.reset()).rejects.toThrow(/closed/);
  });
});
