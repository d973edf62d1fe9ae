/**
 * PlotSpec orchestration: CSVs in, one SVG plus trend summaries out.
 *
 * Panel mode gives each input file its own panel with every selected
 * stream. Family mode overlays one stream from every input file in a
 * single panel, which is how a parameter sweep reads best.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import { parseFramesCsv, toSeries, type StreamSeries } from "./csv.js";
import { renderSvg, streamColor, type Panel, type Trace } from "./svg.js";
import { classifyTrend, type TrendSummary } from "./trend.js";

export interface PlotSpec {
  csvPaths: string[];
  /** null means every stream found, sorted */
  streams: string[] | null;
  maxPoints: number;
  outPath: string;
  /** per-input panel labels; file stems when absent */
  labels: string[] | null;
  /** overlay one stream per file instead of one panel per file */
  family: boolean;
}

export const DEFAULT_MAX_POINTS = 1000;

export interface TraceSummary extends TrendSummary {
  file: string;
  label: string;
  stream: string;
  droppedInRange: number;
}

export interface RenderResult {
  svg: string;
  summaries: TraceSummary[];
}

function labelFor(spec: PlotSpec, index: number): string {
  const given = spec.labels?.[index];
  return given ?? basename(spec.csvPaths[index]!).replace(/\.csv$/, "");
}

function summarize(
  file: string,
  label: string,
  series: StreamSeries,
): TraceSummary {
  const trend = classifyTrend(
    series.points.map((p) => p.latencyUs),
    series.points.map((p) => p.seq),
  );
  return {
    file,
    label,
    stream: series.streamId,
    droppedInRange: series.gaps.length,
    ...trend,
  };
}

export function render(spec: PlotSpec): RenderResult {
  if (spec.csvPaths.length === 0) {
    throw new Error("no input CSVs");
  }
  if (spec.labels !== null && spec.labels.length !== spec.csvPaths.length) {
    throw new Error(
      `${spec.labels.length} labels for ${spec.csvPaths.length} inputs`,
    );
  }
  if (spec.family && spec.streams !== null && spec.streams.length !== 1) {
    throw new Error("family mode overlays exactly one stream per file");
  }

  const perFile = spec.csvPaths.map((path, i) => {
    const rows = parseFramesCsv(readFileSync(path, "utf-8"), path);
    const series = toSeries(rows, spec.streams, spec.maxPoints);
    return { path, label: labelFor(spec, i), series };
  });

  const summaries: TraceSummary[] = [];
  let panels: Panel[];
  if (spec.family) {
    const traces: Trace[] = perFile.map((f, i) => {
      const series = f.series[0];
      if (series === undefined) {
        throw new Error(`${f.path}: no plottable stream`);
      }
      summaries.push(summarize(f.path, f.label, series));
      return { label: f.label, color: streamColor("", i), series };
    });
    panels = [{ title: `${traces[0]!.series.streamId} stream`, traces }];
  } else {
    panels = perFile.map((f) => ({
      title: f.label,
      traces: f.series.map((series, i) => {
        summaries.push(summarize(f.path, f.label, series));
        return { label: series.streamId, color: streamColor(series.streamId, i), series };
      }),
    }));
  }

  return { svg: renderSvg(panels), summaries };
}

export function renderToFile(spec: PlotSpec): TraceSummary[] {
  const { svg, summaries } = render(spec);
  writeFileSync(spec.outPath, svg);
  return summaries;
}
