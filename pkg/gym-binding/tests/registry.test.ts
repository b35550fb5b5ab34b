import { describe, expect, test } from "vitest";

import { make, registeredIds } from "../src/index.js";

describe("registry", () => {
  test("breakout is registered by id", () => {
    expect(registeredIds()).toContain("ToyboxBreakout-v0");
  });

  test("unknown ids throw before any network traffic", () => {
    expect(() => make("SpaceInvaders-v0", { server: "http://nowhere" })).toThrow(
      /unknown environment id/,
    );
  });
});
