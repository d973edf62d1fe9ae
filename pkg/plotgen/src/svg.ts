/**
 * Hand-rolled SVG line panels. No renderer state, no timestamps, no
 * randomness: the same input always produces the same bytes.
 */

import type { StreamSeries } from "./csv.js";

export interface Trace {
  label: string;
  color: string;
  series: StreamSeries;
}

export interface Panel {
  title: string;
  traces: Trace[];
}

const PANEL_W = 720;
const PANEL_H = 250;
const ML = 64;
const MR = 16;
const MT = 32;
const MB = 44;
const PLOT_W = PANEL_W - ML - MR;
const PLOT_H = PANEL_H - MT - MB;

const PALETTE = [
  "#2563eb", "#dc2626", "#ea580c", "#16a34a", "#9333ea",
  "#0891b2", "#ca8a04", "#db2777", "#4b5563", "#65a30d", "#7c3aed",
];

const NAMED_COLORS: Record<string, string> = {
  blue: "#2563eb",
  red: "#dc2626",
  orange: "#ea580c",
  green: "#16a34a",
};

export function streamColor(streamId: string, index: number): string {
  return NAMED_COLORS[streamId] ?? PALETTE[index % PALETTE.length]!;
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 0.01; v += step) {
    ticks.push(v);
  }
  return ticks;
}

function fmt(v: number): string {
  if (Number.isInteger(v)) return String(v);
  const r = v.toFixed(1);
  return r.endsWith(".0") ? String(Math.round(v)) : r;
}

/** Split a series into runs of consecutive seqs; a missing seq is a gap. */
function segments(series: StreamSeries): { seq: number; latencyUs: number }[][] {
  const runs: { seq: number; latencyUs: number }[][] = [];
  let current: { seq: number; latencyUs: number }[] = [];
  let prevSeq: number | null = null;
  for (const p of series.points) {
    if (prevSeq !== null && p.seq !== prevSeq + 1 && current.length > 0) {
      runs.push(current);
      current = [];
    }
    current.push(p);
    prevSeq = p.seq;
  }
  if (current.length > 0) runs.push(current);
  return runs;
}

function renderPanel(panel: Panel, yOffset: number): string {
  const allPoints = panel.traces.flatMap((t) => t.series.points);
  if (allPoints.length === 0) {
    throw new Error(`panel "${panel.title}": nothing to plot`);
  }
  const xMin = 0;
  const xMax = Math.max(...allPoints.map((p) => p.seq));
  const yMaxRaw = Math.max(...allPoints.map((p) => p.latencyUs));
  const yMin = 0;
  const yMax = yMaxRaw * 1.06;

  const xOf = (seq: number) => ML + ((seq - xMin) / (xMax - xMin || 1)) * PLOT_W;
  const yOf = (us: number) =>
    yOffset + MT + PLOT_H - ((us - yMin) / (yMax - yMin || 1)) * PLOT_H;

  let s = "";
  s += `<text x="${ML}" y="${yOffset + MT - 12}" font-size="12" font-weight="600" fill="#1f2937">${esc(panel.title)}</text>\n`;

  for (const v of niceTicks(yMin, yMax, 5)) {
    const y = yOf(v);
    s += `<line x1="${ML}" y1="${y.toFixed(1)}" x2="${ML + PLOT_W}" y2="${y.toFixed(1)}" stroke="#e5e7eb" stroke-width="0.6"/>\n`;
    s += `<text x="${ML - 6}" y="${(y + 3).toFixed(1)}" font-size="9" fill="#6b7280" text-anchor="end">${fmt(v)}</text>\n`;
  }
  for (const v of niceTicks(xMin, xMax, 8)) {
    const x = xOf(v);
    s += `<line x1="${x.toFixed(1)}" y1="${yOffset + MT + PLOT_H}" x2="${x.toFixed(1)}" y2="${yOffset + MT + PLOT_H + 4}" stroke="#9ca3af" stroke-width="0.8"/>\n`;
    s += `<text x="${x.toFixed(1)}" y="${yOffset + MT + PLOT_H + 15}" font-size="9" fill="#6b7280" text-anchor="middle">${fmt(v)}</text>\n`;
  }
  s += `<rect x="${ML}" y="${yOffset + MT}" width="${PLOT_W}" height="${PLOT_H}" fill="none" stroke="#9ca3af" stroke-width="0.8"/>\n`;
  s += `<text x="${ML + PLOT_W / 2}" y="${yOffset + MT + PLOT_H + 30}" font-size="10" fill="#374151" text-anchor="middle">frame index</text>\n`;
  s += `<text x="14" y="${yOffset + MT + PLOT_H / 2}" font-size="10" fill="#374151" text-anchor="middle" transform="rotate(-90 14 ${yOffset + MT + PLOT_H / 2})">latency (us)</text>\n`;

  for (const trace of panel.traces) {
    for (const run of segments(trace.series)) {
      if (run.length === 1) {
        const p = run[0]!;
        s += `<circle cx="${xOf(p.seq).toFixed(1)}" cy="${yOf(p.latencyUs).toFixed(1)}" r="1.2" fill="${trace.color}"/>\n`;
        continue;
      }
      const d = run
        .map((p, i) => `${i === 0 ? "M" : "L"}${xOf(p.seq).toFixed(1)} ${yOf(p.latencyUs).toFixed(1)}`)
        .join("");
      s += `<path d="${d}" fill="none" stroke="${trace.color}" stroke-width="1.1"/>\n`;
    }
  }

  let lx = ML + PLOT_W - 8;
  for (let i = panel.traces.length - 1; i >= 0; i--) {
    const trace = panel.traces[i]!;
    const text = esc(trace.label);
    lx -= 8 * text.length + 18;
    s += `<rect x="${lx}" y="${yOffset + MT + 6}" width="12" height="3" fill="${trace.color}"/>\n`;
    s += `<text x="${lx + 16}" y="${yOffset + MT + 11}" font-size="9" fill="#374151">${text}</text>\n`;
  }
  return s;
}

/** Stack panels vertically into one standalone SVG document. */
export function renderSvg(panels: Panel[]): string {
  const height = PANEL_H * panels.length;
  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${PANEL_W} ${height}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${PANEL_W}" height="${height}" fill="#ffffff"/>\n`;
  panels.forEach((panel, i) => {
    s += renderPanel(panel, i * PANEL_H);
  });
  s += "</svg>\n";
  return s;
}
