/**
 * Trend extraction for a latency series: which of three shapes fits best?
 *
 *   flat                 y = c
 *   rising               y = a + b*x, b > 0
 *   rising-then-plateau  y = a + b*x up to a breakpoint, constant after
 *
 * Each model is least-squares fitted (the breakpoint by scanning a
 * grid) and the winner is chosen by BIC, so a plateau only beats the
 * plain line when the extra parameters buy a real residual reduction.
 * Everything is deterministic.
 */

export type Trend = "flat" | "rising" | "rising-then-plateau";

export interface TrendSummary {
  trend: Trend;
  /** us per frame index over the fitted rising part (0 for flat) */
  slope: number;
  /** plateau level in us; only for rising-then-plateau */
  plateau?: number;
  startUs: number;
  endUs: number;
  maxUs: number;
  points: number;
}

interface Fit {
  sse: number;
  params: number;
}

function sse(xs: number[], ys: number[], f: (x: number) => number): number {
  let total = 0;
  for (let i = 0; i < xs.length; i++) {
    const r = ys[i]! - f(xs[i]!);
    total += r * r;
  }
  return total;
}

function fitConstant(xs: number[], ys: number[]): Fit & { level: number } {
  const level = ys.reduce((a, b) => a + b, 0) / ys.length;
  return { level, sse: sse(xs, ys, () => level), params: 1 };
}

function fitLine(xs: number[], ys: number[]): Fit & { a: number; b: number } {
  const n = xs.length;
  let sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (let i = 0; i < n; i++) {
    sx += xs[i]!;
    sy += ys[i]!;
    sxx += xs[i]! * xs[i]!;
    sxy += xs[i]! * ys[i]!;
  }
  const det = n * sxx - sx * sx;
  const b = det === 0 ? 0 : (n * sxy - sx * sy) / det;
  const a = (sy - b * sx) / n;
  return { a, b, sse: sse(xs, ys, (x) => a + b * x), params: 2 };
}

interface PlateauFit extends Fit {
  a: number;
  b: number;
  level: number;
  breakIndex: number;
}

/** Line then constant; breakpoint scanned over a grid of split indexes. */
function fitPlateau(xs: number[], ys: number[]): PlateauFit {
  const n = xs.length;
  let best: PlateauFit | null = null;
  const candidates = Math.min(64, n - 7);
  for (let c = 1; c <= candidates; c++) {
    const k = 4 + Math.floor(((n - 8) * c) / (candidates + 1));
    const head = fitLine(xs.slice(0, k), ys.slice(0, k));
    const tail = fitConstant(xs.slice(k), ys.slice(k));
    const total = head.sse + tail.sse;
    if (best === null || total < best.sse) {
      best = {
        a: head.a,
        b: head.b,
        level: tail.level,
        breakIndex: k,
        sse: total,
        params: 4,
      };
    }
  }
  return best!;
}

function bic(n: number, fit: Fit): number {
  // tiny floor keeps a perfect fit from producing -Infinity
  return n * Math.log(fit.sse / n + 1e-12) + fit.params * Math.log(n);
}

export function classifyTrend(latenciesUs: number[], seqs?: number[]): TrendSummary {
  const n = latenciesUs.length;
  if (n < 8) {
    throw new Error(`trend extraction needs at least 8 points, got ${n}`);
  }
  const xs = seqs ?? latenciesUs.map((_, i) => i);
  if (xs.length !== n) {
    throw new Error("seqs and latencies must align");
  }
  const ys = latenciesUs;

  const constant = fitConstant(xs, ys);
  const line = fitLine(xs, ys);
  const plateau = fitPlateau(xs, ys);

  const scores: [Trend, number][] = [
    ["flat", bic(n, constant)],
    ["rising", bic(n, line)],
    ["rising-then-plateau", bic(n, plateau)],
  ];
  scores.sort((p, q) => p[1] - q[1]);
  let trend = scores[0]![0];

  // A winning line with a non-positive slope is not "rising"; same for a
  // plateau whose head does not climb. Fall back to the flat label.
  if (trend === "rising" && line.b <= 0) trend = "flat";
  if (trend === "rising-then-plateau" && (plateau.b <= 0 || plateau.level <= ys[0]!)) {
    trend = "flat";
  }

  const summary: TrendSummary = {
    trend,
    slope: trend === "flat" ? 0 : trend === "rising" ? line.b : plateau.b,
    startUs: ys[0]!,
    endUs: ys[n - 1]!,
    maxUs: Math.max(...ys),
    points: n,
  };
  if (trend === "rising-then-plateau") summary.plateau = plateau.level;
  return summary;
}
