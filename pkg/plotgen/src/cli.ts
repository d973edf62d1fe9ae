#!/usr/bin/env node
/**
 * plotgen — latency panels from simulator CSV exports.
 *
 * Usage:
 *   plotgen frames.csv [more.csv ...] --out panels.svg
 *     [--streams blue,red,orange] [--max-points 1000]
 *     [--labels "case a,case b"] [--family] [--summary trends.json]
 *
 * One panel per input CSV; --family overlays one stream (default: the
 * only one given via --streams) from each input in a single panel.
 * Trend summaries (flat / rising / rising-then-plateau per trace) are
 * printed to stdout as JSON and optionally written with --summary.
 */

import { writeFileSync } from "node:fs";
import { resolve } from "node:path";
import process from "node:process";
import { fileURLToPath } from "node:url";

import { DEFAULT_MAX_POINTS, renderToFile, type PlotSpec } from "./plot.js";

export class UsageError extends Error {}

export function parseArgs(argv: string[]): PlotSpec & { summaryPath: string | null } {
  const csvPaths: string[] = [];
  let streams: string[] | null = null;
  let maxPoints = DEFAULT_MAX_POINTS;
  let outPath: string | null = null;
  let labels: string[] | null = null;
  let family = false;
  let summaryPath: string | null = null;

  const takeValue = (flag: string, next: string | undefined): string => {
    if (next === undefined) throw new UsageError(`${flag} needs a value`);
    return next;
  };

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    switch (arg) {
      case "--streams":
        streams = takeValue(arg, argv[++i]).split(",").map((s) => s.trim());
        break;
      case "--max-points": {
        const raw = takeValue(arg, argv[++i]);
        maxPoints = Number(raw);
        if (!Number.isInteger(maxPoints) || maxPoints < 8) {
          throw new UsageError(`--max-points must be an integer >= 8, got "${raw}"`);
        }
        break;
      }
      case "--out":
        outPath = takeValue(arg, argv[++i]);
        break;
      case "--labels":
        labels = takeValue(arg, argv[++i]).split(",").map((s) => s.trim());
        break;
      case "--family":
        family = true;
        break;
      case "--summary":
        summaryPath = takeValue(arg, argv[++i]);
        break;
      default:
        if (arg.startsWith("--")) throw new UsageError(`unknown flag ${arg}`);
        csvPaths.push(arg);
    }
  }

  if (csvPaths.length === 0) throw new UsageError("no input CSVs given");
  if (outPath === null) throw new UsageError("--out is required");
  if (family && streams === null) {
    throw new UsageError("--family needs --streams with exactly one stream");
  }
  return { csvPaths, streams, maxPoints, outPath, labels, family, summaryPath };
}

export function main(argv: string[]): number {
  let spec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`plotgen: ${err.message}`);
      console.error("usage: plotgen <csv...> --out <svg> [--streams a,b] " +
        "[--max-points N] [--labels l1,l2] [--family] [--summary out.json]");
      return 2;
    }
    throw err;
  }

  try {
    const summaries = renderToFile(spec);
    const report = JSON.stringify(summaries, null, 2);
    console.log(report);
    if (spec.summaryPath !== null) {
      writeFileSync(spec.summaryPath, report + "\n");
    }
    console.error(`wrote ${spec.outPath}`);
    return 0;
  } catch (err) {
    console.error(`plotgen: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

if (
  process.argv[1] !== undefined &&
  fileURLToPath(import.meta.url) === resolve(process.argv[1])
) {
  process.exit(main(process.argv.slice(2)));
}
