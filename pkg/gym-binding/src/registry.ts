/**
 * Environment registry: construct environments by id string.
 */

import { BoundEnv } from "./env.js";
import type { EnvOptions } from "./types.js";

export type EnvFactory = (options: EnvOptions) => Promise<BoundEnv>;

const registry = new Map<string, EnvFactory>();

export function register(id: string, factory: EnvFactory): void {
  registry.set(id, factory);
}

export function registeredIds(): string[] {
  return [...registry.keys()];
}

/** Construct a registered environment. Throws on unknown ids. */
export function make(id: string, options: EnvOptions): Promise<BoundEnv> {
  const factory = registry.get(id);
  if (!factory) {
    throw new Error(`unknown environment id ${JSON.stringify(id)}; known: ${registeredIds().join(", ")}`);
  }
  return factory(options);
}

register("ToyboxBreakout-v0", (options) => BoundEnv.create(options));
