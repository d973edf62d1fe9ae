"""Per-frame outcome recording, boundedness detection, and exports.

One CSV row per (stream, sequence number): delivered rows carry delivery
time and latency; a row for a frame whose every copy died carries the
terminal drop cause of the last copy.  Duplicate-eliminated copies of a
frame that still gets delivered are counted but produce no row of their
own.  Rows appear in finalization order, which is deterministic.

Boundedness is a least-squares slope of latency versus production time
over the second half of the run (the first half absorbs warm-up
transients).  The two thresholds deliberately leave a gap: a slope falling
between them is neither regime and fails the run loudly rather than
guessing.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .rational import Rat, ns_string

DROP_SHAPER = "shaper-mrt"
DROP_FILTER = "loss-filter"
DROP_ELIMINATED = "duplicate-eliminated"
DROP_MISCONFIG = "misconfig"

DROP_CAUSES = (DROP_SHAPER, DROP_FILTER, DROP_ELIMINATED, DROP_MISCONFIG)

BOUNDED = "Bounded"
UNBOUNDED = "Unbounded"
INCONCLUSIVE = "Inconclusive"

DEFAULT_BOUNDED_THRESHOLD = 1e-4  # 100 us/s
DEFAULT_UNBOUNDED_THRESHOLD = 1e-2  # 10 ms/s


class ModelIntegrityError(RuntimeError):
    """The simulation violated one of its own conservation contracts."""


class ThresholdGapError(RuntimeError):
    """Fitted slope fell between the bounded and unbounded thresholds."""


@dataclass(slots=True)
class BoundednessVerdict:
    verdict: str
    slope: float  # latency seconds per production second
    max_latency: object  # Rat | None
    min_latency: object  # Rat | None
    fitted_records: int


class StreamStats:
    """Columnar per-stream tallies; exact times throughout."""

    __slots__ = (
        "stream_id",
        "produced",
        "replicated",
        "delivered_seq",
        "delivered_produced",
        "delivered_time",
        "drops",
        "inversions",
        "live",
        "delivered_set",
        "max_delivered_seq",
    )

    def __init__(self, stream_id: str):
        self.stream_id = stream_id
        self.produced = 0
        self.replicated = 0
        self.delivered_seq: list[int] = []
        self.delivered_produced: list = []
        self.delivered_time: list = []
        self.drops = {cause: 0 for cause in DROP_CAUSES}
        self.inversions = 0
        self.live: dict[int, int] = {}
        self.delivered_set: set[int] = set()
        self.max_delivered_seq = -1

    @property
    def delivered(self) -> int:
        return len(self.delivered_seq)

    @property
    def in_flight(self) -> int:
        return sum(self.live.values())

    def latencies(self):
        return [d - p for p, d in zip(self.delivered_produced, self.delivered_time)]


class Recorder:
    """Run-wide frame accounting: deliveries, drops, order, conservation."""

    def __init__(self):
        self.streams: dict[str, StreamStats] = {}
        self.rows: list[tuple] = []  # (stream, seq, produced, delivered, cause)
        self.order_log: dict[str, list[tuple[str, int]]] = {}
        self._order_watch: dict[str, set] = {}

    def stream(self, stream_id: str) -> StreamStats:
        stats = self.streams.get(stream_id)
        if stats is None:
            stats = self.streams[stream_id] = StreamStats(stream_id)
        return stats

    # -- order assertion hook -------------------------------------------------

    def watch_order(self, switch_name: str, stream_ids) -> None:
        self._order_watch[switch_name] = set(stream_ids)
        self.order_log[switch_name] = []

    def note_arrival(self, switch_name: str, frame) -> None:
        watch = self._order_watch.get(switch_name)
        if watch is not None and frame.stream_id in watch:
            self.order_log[switch_name].append((frame.stream_id, frame.seq))

    # -- frame lifecycle ------------------------------------------------------

    def frame_emitted(self, frame) -> None:
        stats = self.stream(frame.stream_id)
        stats.produced += 1
        stats.live[frame.seq] = stats.live.get(frame.seq, 0) + 1

    def frame_replicated(self, frame, extra_copies: int) -> None:
        stats = self.stream(frame.stream_id)
        stats.replicated += extra_copies
        stats.live[frame.seq] = stats.live.get(frame.seq, 0) + extra_copies

    def frame_delivered(self, frame, t) -> None:
        stats = self.stream(frame.stream_id)
        seq = frame.seq
        if seq in stats.delivered_set:
            raise ModelIntegrityError(
                f"duplicate delivery of {frame.stream_id} seq {seq} at the sink"
            )
        stats.delivered_set.add(seq)
        stats.delivered_seq.append(seq)
        stats.delivered_produced.append(frame.produced)
        stats.delivered_time.append(t)
        if seq < stats.max_delivered_seq:
            stats.inversions += 1
        else:
            stats.max_delivered_seq = seq
        self._consume_copy(stats, seq)
        self.rows.append((frame.stream_id, seq, frame.produced, t, None))

    def frame_dropped(self, frame, cause: str) -> None:
        stats = self.stream(frame.stream_id)
        stats.drops[cause] += 1
        seq = frame.seq
        last_copy = self._consume_copy(stats, seq)
        if last_copy and seq not in stats.delivered_set:
            self.rows.append((frame.stream_id, seq, frame.produced, None, cause))

    def _consume_copy(self, stats: StreamStats, seq: int) -> bool:
        remaining = stats.live.get(seq)
        if remaining is None:
            raise ModelIntegrityError(
                f"{stats.stream_id} seq {seq}: terminal event for a frame with "
                "no live copies"
            )
        if remaining == 1:
            del stats.live[seq]
            return True
        stats.live[seq] = remaining - 1
        return False

    # -- conservation ---------------------------------------------------------

    def check_conservation(self, residual_frames) -> None:
        """Exact per-stream identity against frames actually found queued.

        residual_frames: iterable of frames still sitting in egress queues
        or on the wire when the run stopped.
        """
        residue: dict[str, int] = {}
        for frame in residual_frames:
            residue[frame.stream_id] = residue.get(frame.stream_id, 0) + 1
        for stream_id, stats in self.streams.items():
            total = stats.produced + stats.replicated
            accounted = (
                stats.delivered + sum(stats.drops.values()) + stats.in_flight
            )
            if total != accounted:
                raise ModelIntegrityError(
                    f"{stream_id}: produced+replicated {total} != "
                    f"delivered+dropped+in_flight {accounted}"
                )
            found = residue.get(stream_id, 0)
            if found != stats.in_flight:
                raise ModelIntegrityError(
                    f"{stream_id}: {stats.in_flight} copies unaccounted but "
                    f"{found} found in queues"
                )


def boundedness(
    produced,
    latencies,
    duration,
    bounded_threshold: float = DEFAULT_BOUNDED_THRESHOLD,
    unbounded_threshold: float = DEFAULT_UNBOUNDED_THRESHOLD,
    min_records: int = 100,
) -> BoundednessVerdict:
    """Fit latency growth over the second half of the run and classify it."""
    if len(produced) != len(latencies):
        raise ValueError("produced and latencies must align")
    max_latency = max(latencies, default=None)
    min_latency = min(latencies, default=None)
    half = Rat(duration) / 2
    xs = []
    ys = []
    for p, lat in zip(produced, latencies):
        if p >= half:
            xs.append(float(p))
            ys.append(float(lat))
    if len(xs) < min_records:
        return BoundednessVerdict(INCONCLUSIVE, 0.0, max_latency, min_latency, len(xs))
    slope = float(np.polyfit(np.array(xs), np.array(ys), 1)[0])
    if slope > unbounded_threshold:
        verdict = UNBOUNDED
    elif slope < bounded_threshold:
        verdict = BOUNDED
    else:
        raise ThresholdGapError(
            f"slope {slope:.6g} s/s falls between bounded threshold "
            f"{bounded_threshold:g} and unbounded threshold {unbounded_threshold:g}"
        )
    return BoundednessVerdict(verdict, slope, max_latency, min_latency, len(xs))


def summarize(stats: StreamStats) -> dict:
    lat = stats.latencies()
    return {
        "stream": stats.stream_id,
        "produced": stats.produced,
        "replicated_copies": stats.replicated,
        "delivered": stats.delivered,
        "min_latency_ns": ns_string(min(lat)) if lat else None,
        "max_latency_ns": ns_string(max(lat)) if lat else None,
        "drops": dict(stats.drops),
        "order_inversions": stats.inversions,
        "in_flight_at_end": stats.in_flight,
    }


CSV_HEADER = ["stream_id", "seq", "produced_ns", "delivered_ns", "latency_ns", "drop_cause"]


def export_csv(rows, path) -> None:
    """Rows as written by Recorder; exact ns rendering; LF line endings."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for stream_id, seq, produced, delivered, cause in rows:
            if delivered is None:
                writer.writerow([stream_id, seq, ns_string(produced), "", "", cause])
            else:
                writer.writerow(
                    [
                        stream_id,
                        seq,
                        ns_string(produced),
                        ns_string(delivered),
                        ns_string(delivered - produced),
                        "",
                    ]
                )


def write_summary(payload: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
