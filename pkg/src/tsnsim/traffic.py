"""Stream definitions and frame emission.

Covers the adversarial three-stream pattern (two frames per stream per
period, spaced by one token-recovery interval, inside a period shorter than
three intervals), plain periodic streams with optional bounded jitter, and
the TDMA-style highest-priority blocker.

Jitter is drawn as a whole number of nanoseconds, uniform on
[0, jitter_bound]: it keeps every emission on the 1 ns lattice relative to
its nominal offset, which keeps denominators small without giving up
randomness that matters at the simulated timescales.
"""

from __future__ import annotations

from dataclasses import dataclass

from .rational import Rat, ZERO, rat, to_ns

ADVERSARIAL_PRIORITY = 4
TDMA_PRIORITY = 7


@dataclass(slots=True)
class Frame:
    """One frame instance in flight.

    Replication creates additional instances sharing (stream_id, seq); the
    pair is the redundancy tag.  `member` names the path a replicated copy
    follows, None before any split.
    """

    stream_id: str
    seq: int
    size_bits: int
    priority: int
    produced: Rat
    member: int | None = None


@dataclass(frozen=True)
class StreamSpec:
    stream_id: str
    frame_size_bits: int
    priority: int
    period: Rat
    offsets: tuple  # emission offsets within one period, strictly increasing
    jitter_bound: Rat
    source: str
    destination: str
    frer_enabled: bool = False
    start: Rat = ZERO  # delay before the first period begins

    def __post_init__(self):
        if self.frame_size_bits <= 0:
            raise ValueError(f"{self.stream_id}: frame size must be positive")
        if not self.offsets:
            raise ValueError(f"{self.stream_id}: at least one emission offset")
        if any(b <= a for a, b in zip(self.offsets, self.offsets[1:])):
            raise ValueError(f"{self.stream_id}: offsets must be strictly increasing")
        if not all(0 <= off < self.period for off in self.offsets):
            raise ValueError(f"{self.stream_id}: offsets must lie inside the period")
        if self.jitter_bound < 0:
            raise ValueError(f"{self.stream_id}: jitter bound must be >= 0")
        if self.start < 0:
            raise ValueError(f"{self.stream_id}: start must be >= 0")

    @property
    def frames_per_period(self) -> int:
        return len(self.offsets)


@dataclass(frozen=True)
class AdversarialSpec:
    """Parameters of the adversarial generation pattern.

    Per period: blue emits at blue_start and blue_start + interval; red
    follows blue by red_offset_after_blue; orange follows red's second
    emission by orange_offset_after_red2.  Requires period < 3 * interval,
    otherwise shaping to one frame per interval would close the period and
    no backlog could build up.
    """

    interval: Rat  # I
    period: Rat  # T
    blue_start: Rat
    red_offset_after_blue: Rat
    orange_offset_after_red2: Rat
    frame_size_bits: int = 1000  # 125 byte frames on the wire
    priority: int = ADVERSARIAL_PRIORITY

    def __post_init__(self):
        if not self.period < 3 * self.interval:
            raise ValueError(
                f"adversarial construction needs period < 3*interval; "
                f"got period {self.period}, interval {self.interval}"
            )


def expand_adversarial(
    spec: AdversarialSpec,
    sources: dict | None = None,
    destination: str = "listener",
    frer_enabled: dict | None = None,
) -> tuple:
    """Three StreamSpecs (blue, red, orange) from the pattern parameters.

    sources maps stream id -> source node (default: one talker per stream).
    """
    sources = sources or {}
    frer_enabled = frer_enabled or {}
    blue0 = spec.blue_start
    red0 = blue0 + spec.red_offset_after_blue
    orange0 = red0 + spec.interval + spec.orange_offset_after_red2

    def make(stream_id, first):
        return StreamSpec(
            stream_id=stream_id,
            frame_size_bits=spec.frame_size_bits,
            priority=spec.priority,
            period=spec.period,
            offsets=(first, first + spec.interval),
            jitter_bound=ZERO,
            source=sources.get(stream_id, f"talker_{stream_id}"),
            destination=destination,
            frer_enabled=frer_enabled.get(stream_id, False),
        )

    return make("blue", blue0), make("red", red0), make("orange", orange0)


def emit(spec: StreamSpec, period_index: int, rng) -> list:
    """Frames of one period: (emission_time, Frame) per offset.

    Sequence numbers count frames from the start of the run.  Jitter, when
    configured, is an integer-nanosecond draw from [0, jitter_bound]; the
    raw times may therefore be non-monotonic when jitter exceeds the
    emission spacing, which the source node resolves at scheduling time.
    """
    if period_index < 0:
        raise ValueError("period_index must be >= 0")
    base = spec.start + spec.period * period_index
    out = []
    jitter_ns = None
    if spec.jitter_bound > 0:
        jitter_ns = to_ns(spec.jitter_bound)
    for i, offset in enumerate(spec.offsets):
        t = base + offset
        if jitter_ns is not None:
            t = t + rat(rng.randrange(jitter_ns + 1), 10**9)
        seq = period_index * len(spec.offsets) + i
        out.append(
            (
                t,
                Frame(
                    stream_id=spec.stream_id,
                    seq=seq,
                    size_bits=spec.frame_size_bits,
                    priority=spec.priority,
                    produced=t,
                ),
            )
        )
    return out


def tdma_blocker(period, slot_length, link_rate, source, destination) -> StreamSpec:
    """Highest-priority periodic stream occupying `slot_length` of each period.

    Modeled as one frame whose transmission time equals the slot: size =
    slot_length * link_rate bits.
    """
    size = slot_length * rat(link_rate)
    size_bits = int(size)
    if size_bits != size:
        raise ValueError("slot_length * link_rate must be a whole number of bits")
    return StreamSpec(
        stream_id="tdma",
        frame_size_bits=size_bits,
        priority=TDMA_PRIORITY,
        period=period,
        offsets=(ZERO,),
        jitter_bound=ZERO,
        source=source,
        destination=destination,
    )
