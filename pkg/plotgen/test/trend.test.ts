import { describe, expect, it } from "vitest";

import { classifyTrend } from "../src/trend.js";

// Deterministic wobble so the fits see realistic residuals.
function wobble(i: number): number {
  return 2 * Math.sin(i * 0.7) + ((i * 37) % 11) / 10;
}

describe("classifyTrend", () => {
  it("labels a constant series flat", () => {
    const ys = Array.from({ length: 400 }, (_, i) => 115 + wobble(i));
    expect(classifyTrend(ys).trend).toBe("flat");
  });

  it("labels an alternating two-level series flat", () => {
    // the friendly-order baseline: latency flips between two constants
    const ys = Array.from({ length: 400 }, (_, i) => (i % 2 === 0 ? 75 : 115));
    const summary = classifyTrend(ys);
    expect(summary.trend).toBe("flat");
    expect(summary.slope).toBe(0);
  });

  it("labels steady growth rising", () => {
    const ys = Array.from({ length: 400 }, (_, i) => 115 + 2.5 * i + wobble(i));
    const summary = classifyTrend(ys);
    expect(summary.trend).toBe("rising");
    expect(summary.slope).toBeCloseTo(2.5, 1);
  });

  it("labels growth that saturates rising-then-plateau", () => {
    const ys = Array.from(
      { length: 400 },
      (_, i) => Math.min(115 + 2.5 * i, 450) + wobble(i),
    );
    const summary = classifyTrend(ys);
    expect(summary.trend).toBe("rising-then-plateau");
    expect(summary.plateau).toBeCloseTo(450, -1);
  });

  it("finds an early plateau even when most points sit on it", () => {
    // saturation after 5% of the series, like a tight residence limit
    const ys = Array.from(
      { length: 1000 },
      (_, i) => Math.min(115 + 5 * i, 215) + wobble(i),
    );
    expect(classifyTrend(ys).trend).toBe("rising-then-plateau");
  });

  it("does not call a falling series rising", () => {
    const ys = Array.from({ length: 400 }, (_, i) => 500 - i + wobble(i));
    expect(classifyTrend(ys).trend).toBe("flat");
  });

  it("respects explicit x values", () => {
    const seqs = Array.from({ length: 200 }, (_, i) => i * 10);
    const ys = seqs.map((x) => 10 + 0.5 * x);
    const summary = classifyTrend(ys, seqs);
    expect(summary.trend).toBe("rising");
    expect(summary.slope).toBeCloseTo(0.5, 3);
  });

  it("needs at least 8 points", () => {
    expect(() => classifyTrend([1, 2, 3])).toThrowError(/at least 8 points/);
  });
});
