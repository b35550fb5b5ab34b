/**
 * Wire types shared with the breakout service.
 *
 * Only JSON and base64 byte strings cross the boundary: structured state
 * views, canonical state-document text, and raw RGB frame bytes.
 */

/** Structured snapshot of the game, mirroring the native query selectors. */
export interface StateView {
  frame: number;
  score: number;
  lives: number;
  level: number;
  ball_pos: [number, number];
  ball_vel: [number, number];
  ball_in_play: boolean;
  paddle_x: number;
  live_brick_count: number;
  bricks_alive: boolean[];
  lifecycle: string;
}

/** Per-step info map: score, lives, frame counter, and frame events. */
export interface StepInfo {
  score: number;
  lives: number;
  frame: number;
  events: Array<Array<string | number>>;
}

/** One observation: the structured view plus optional raw RGB pixels. */
export interface Observation {
  stateView: StateView;
  /** Row-major uint8 RGB bytes (height x width x 3); present when rendering. */
  frame?: Uint8Array;
}

/** Gym-style step tuple. */
export type StepResult = [Observation, number, boolean, StepInfo];

export interface ObservationSpace {
  shape: [number, number, number];
  dtype: "uint8";
}

export interface ActionSpace {
  n: number;
  actions: string[];
}

/** Options accepted by the environment constructor (one-to-one with the CLI flags). */
export interface EnvOptions {
  /** Service base URL, e.g. "http://127.0.0.1:8461". */
  server: string;
  /** Game configuration overrides (validated service-side). */
  config?: Record<string, unknown>;
  /** Canonical state-document text to resume from. */
  stateDocument?: string;
  frameSkip?: number;
  truncateRewards?: boolean;
  episodePolicy?: "standard" | "single_life_single_level";
  seed?: number;
  /** Return pixel frames from reset/step (slower; off by default). */
  render?: boolean;
}
