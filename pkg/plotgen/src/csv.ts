/**
 * Reader for the simulator's frames.csv exports.
 *
 * Expected header: stream_id,seq,produced_ns,delivered_ns,latency_ns,drop_cause
 * Times are exact nanoseconds; a non-integer value is written as a
 * fraction ("650557/11"). Dropped or undelivered frames leave the
 * delivered/latency cells empty and carry a cause instead.
 */

export const EXPECTED_HEADER = [
  "stream_id",
  "seq",
  "produced_ns",
  "delivered_ns",
  "latency_ns",
  "drop_cause",
] as const;

export interface FrameRow {
  streamId: string;
  seq: number;
  producedNs: number;
  /** null when the frame never reached the listener */
  latencyNs: number | null;
  dropCause: string;
}

export class CsvSchemaError extends Error {}

/** "123" or "123/7" to a plain number; exactness is not needed for plotting. */
function parseNs(cell: string, column: string, line: number): number {
  const m = /^(-?\d+)(?:\/(\d+))?$/.exec(cell);
  if (!m || m[2] === "0") {
    throw new CsvSchemaError(
      `line ${line}: column "${column}" is not a nanosecond value: "${cell}"`,
    );
  }
  const num = Number(m[1]);
  return m[2] === undefined ? num : num / Number(m[2]);
}

export function parseFramesCsv(text: string, source = "<csv>"): FrameRow[] {
  const lines = text.split(/\r?\n/);
  if (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) {
    throw new CsvSchemaError(`${source}: empty file`);
  }
  const header = (lines[0] ?? "").split(",");
  for (let i = 0; i < EXPECTED_HEADER.length; i++) {
    if (header[i] !== EXPECTED_HEADER[i]) {
      throw new CsvSchemaError(
        `${source}: schema mismatch at column ${i + 1}: expected ` +
          `"${EXPECTED_HEADER[i]}", found "${header[i] ?? "<missing>"}"`,
      );
    }
  }
  if (header.length !== EXPECTED_HEADER.length) {
    throw new CsvSchemaError(
      `${source}: schema mismatch: unexpected extra column "${header[EXPECTED_HEADER.length]}"`,
    );
  }

  const rows: FrameRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i]!.split(",");
    if (cells.length !== EXPECTED_HEADER.length) {
      throw new CsvSchemaError(
        `${source}: line ${i + 1}: expected ${EXPECTED_HEADER.length} cells, got ${cells.length}`,
      );
    }
    const [streamId, seqText, producedText, deliveredText, latencyText, dropCause] =
      cells as [string, string, string, string, string, string];
    const seq = Number(seqText);
    if (!Number.isInteger(seq) || seq < 0) {
      throw new CsvSchemaError(`${source}: line ${i + 1}: column "seq" is not an index: "${seqText}"`);
    }
    const delivered = deliveredText !== "";
    if (delivered !== (latencyText !== "")) {
      throw new CsvSchemaError(
        `${source}: line ${i + 1}: "delivered_ns" and "latency_ns" must be both set or both empty`,
      );
    }
    rows.push({
      streamId,
      seq,
      producedNs: parseNs(producedText, "produced_ns", i + 1),
      latencyNs: delivered ? parseNs(latencyText, "latency_ns", i + 1) : null,
      dropCause,
    });
  }
  return rows;
}

export interface StreamSeries {
  streamId: string;
  /** delivered frames in production order, truncated to maxPoints */
  points: { seq: number; latencyUs: number }[];
  /** production indexes inside the plotted seq range that never delivered */
  gaps: number[];
}

/**
 * Per-stream latency series in production order. maxPoints counts
 * delivered latency values; dropped frames inside the kept range stay
 * visible as gaps but do not consume the budget.
 */
export function toSeries(
  rows: FrameRow[],
  streams: string[] | null,
  maxPoints: number,
): StreamSeries[] {
  const byStream = new Map<string, FrameRow[]>();
  for (const row of rows) {
    if (streams !== null && !streams.includes(row.streamId)) continue;
    let bucket = byStream.get(row.streamId);
    if (bucket === undefined) byStream.set(row.streamId, (bucket = []));
    bucket.push(row);
  }
  if (streams !== null) {
    for (const wanted of streams) {
      if (!byStream.has(wanted)) {
        const seen = [...new Set(rows.map((r) => r.streamId))].sort().join(", ");
        throw new CsvSchemaError(`stream "${wanted}" not in CSV (has: ${seen})`);
      }
    }
  }

  const order = streams ?? [...byStream.keys()].sort();
  const series: StreamSeries[] = [];
  for (const streamId of order) {
    const bucket = byStream.get(streamId)!;
    bucket.sort((a, b) => a.seq - b.seq);
    const points: { seq: number; latencyUs: number }[] = [];
    const gaps: number[] = [];
    for (const row of bucket) {
      if (row.latencyNs === null) {
        gaps.push(row.seq);
      } else {
        if (points.length >= maxPoints) break;
        points.push({ seq: row.seq, latencyUs: row.latencyNs / 1000 });
      }
    }
    const lastSeq = points.length > 0 ? points[points.length - 1]!.seq : -1;
    series.push({ streamId, points, gaps: gaps.filter((s) => s < lastSeq) });
  }
  return series;
}
