/**
 * End-to-end over the committed fixtures, which were exported by the
 * simulator CLI (netA at 150 ms simulated time; the mrt files come
 * from its residence-limit sweep). The trend assertions here are the
 * acceptance check for this package: friendly order is flat,
 * adversarial order rises, residence limits rise then plateau.
 */

import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { render, type PlotSpec } from "../src/plot.js";
import { parseArgs, main } from "../src/cli.js";

const FIXTURES = fileURLToPath(new URL("../fixtures", import.meta.url));

const fixture = (name: string) => join(FIXTURES, name);

function spec(overrides: Partial<PlotSpec>): PlotSpec {
  return {
    csvPaths: [],
    streams: null,
    maxPoints: 1000,
    outPath: "",
    labels: null,
    family: false,
    ...overrides,
  };
}

describe("render on simulator exports", () => {
  it("friendly arrival order: every stream flat", () => {
    const { summaries } = render(spec({ csvPaths: [fixture("netA-a.csv")] }));
    expect(summaries.map((s) => s.stream)).toEqual(["blue", "orange", "red"]);
    for (const s of summaries) {
      expect(s.trend, `${s.stream} should be flat`).toBe("flat");
      expect(s.points).toBe(1000);
    }
  });

  it("adversarial arrival order: every stream rising", () => {
    const { summaries } = render(spec({ csvPaths: [fixture("netA-b.csv")] }));
    for (const s of summaries) {
      expect(s.trend, `${s.stream} should rise`).toBe("rising");
      expect(s.endUs).toBeGreaterThan(s.startUs * 5);
    }
  });

  it("residence-limit family: rising then plateau, ordered by limit", () => {
    const { summaries } = render(
      spec({
        csvPaths: [
          fixture("mrt-100us.csv"),
          fixture("mrt-500us.csv"),
          fixture("mrt-1ms.csv"),
        ],
        streams: ["blue"],
        family: true,
        labels: ["100us", "500us", "1ms"],
      }),
    );
    expect(summaries.map((s) => s.label)).toEqual(["100us", "500us", "1ms"]);
    for (const s of summaries) {
      expect(s.trend, `${s.label} should plateau`).toBe("rising-then-plateau");
      expect(s.droppedInRange).toBeGreaterThan(0);
    }
    const plateaus = summaries.map((s) => s.plateau!);
    expect(plateaus[0]).toBeLessThan(plateaus[1]!);
    expect(plateaus[1]).toBeLessThan(plateaus[2]!);
    // The fitted plateau is the steady-state mean (the survivors form a
    // sawtooth under the cap); the worst survivor sits exactly at the
    // residence limit plus blue's 95 us base delay.
    const limits = [100, 500, 1000];
    summaries.forEach((s, i) => {
      expect(s.maxUs).toBe(limits[i]! + 95);
      expect(s.plateau!).toBeGreaterThan(limits[i]!);
      expect(s.plateau!).toBeLessThan(s.maxUs);
    });
  });

  it("dropped frames become path gaps", () => {
    const { svg, summaries } = render(
      spec({ csvPaths: [fixture("mrt-100us.csv")], streams: ["blue"] }),
    );
    const pathCount = (svg.match(/<path /g) ?? []).length;
    expect(summaries[0]!.droppedInRange).toBeGreaterThan(100);
    expect(pathCount).toBeGreaterThan(summaries[0]!.droppedInRange);
  });

  it("identical inputs give identical bytes", () => {
    const s = spec({ csvPaths: [fixture("netA-b.csv")] });
    expect(render(s).svg).toBe(render(s).svg);
  });

  it("honors max-points", () => {
    const { summaries } = render(
      spec({ csvPaths: [fixture("netA-a.csv")], maxPoints: 200 }),
    );
    for (const s of summaries) expect(s.points).toBe(200);
  });
});

describe("cli", () => {
  it("parses a full flag set", () => {
    const parsed = parseArgs([
      "a.csv", "b.csv", "--out", "x.svg", "--streams", "blue",
      "--max-points", "500", "--labels", "one,two", "--family",
      "--summary", "t.json",
    ]);
    expect(parsed).toMatchObject({
      csvPaths: ["a.csv", "b.csv"],
      streams: ["blue"],
      maxPoints: 500,
      outPath: "x.svg",
      labels: ["one", "two"],
      family: true,
      summaryPath: "t.json",
    });
  });

  it.each([
    [[]],
    [["a.csv"]],
    [["a.csv", "--out"]],
    [["a.csv", "--out", "x.svg", "--max-points", "3"]],
    [["a.csv", "--out", "x.svg", "--family"]],
    [["a.csv", "--out", "x.svg", "--bogus"]],
  ])("usage error for %j", (argv) => {
    expect(main(argv as string[])).toBe(2);
  });

  it("renders files end to end and reports the trends", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotgen-"));
    const out = join(dir, "panels.svg");
    const summaryPath = join(dir, "trends.json");
    const code = main([
      fixture("netA-a.csv"), fixture("netA-b.csv"),
      "--out", out, "--labels", "friendly,adversarial",
      "--summary", summaryPath,
    ]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf-8")).toMatch(/^<svg /);
    const trends = JSON.parse(readFileSync(summaryPath, "utf-8"));
    expect(trends.filter((t: { label: string }) => t.label === "friendly"))
      .toHaveLength(3);
    expect(
      trends.map((t: { label: string; trend: string }) => `${t.label}:${t.trend}`),
    ).toEqual([
      "friendly:flat", "friendly:flat", "friendly:flat",
      "adversarial:rising", "adversarial:rising", "adversarial:rising",
    ]);
  });

  it("schema mismatch exits 1 and names the column", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotgen-"));
    const bad = join(dir, "bad.csv");
    const text = readFileSync(fixture("netA-a.csv"), "utf-8")
      .replace("latency_ns", "latency_us");
    writeFileSync(bad, text);
    expect(main([bad, "--out", join(dir, "x.svg")])).toBe(1);
  });
});
