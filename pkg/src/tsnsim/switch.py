"""Store-and-forward switches, end devices, and directed links.

Timing model per hop: a frame is received in full at the moment its last
bit leaves the wire, then becomes visible to the next node's ingress
pipeline one processing delay later.  The ingress pipeline runs
atomically at that instant: loss filtering, per-port eligibility
assignment, duplicate recovery, optional post-recovery eligibility
assignment, forwarding lookup, replication.  Eligibility times computed
at ingress are enforced at egress dequeue.

Egress per link: one heap per priority class keyed by
(release_time, enqueue_order), so unshaped traffic degenerates to FIFO
and shaped traffic transmits in eligibility order with arrival order
breaking ties.  Classes are strictly prioritised: a lower class
transmits only when no higher class holds a releasable frame.  When the
link is idle but every queued frame is still ineligible, a wake event is
armed for the earliest release time.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .ats import AtsScheduler, SchedulerGroup, assign_eligibility
from .frer import LossFilterState, RecoveryState, recover, split
from .kernel import EGRESS_WAKE, EMISSION_DUE, FRAME_ARRIVAL, TX_COMPLETE, Simulation
from .metrics import (
    DROP_ELIMINATED,
    DROP_FILTER,
    DROP_MISCONFIG,
    DROP_SHAPER,
    Recorder,
)
from .rational import NANOSECOND, Rat, ZERO
from .traffic import Frame, StreamSpec, emit


def transmit_duration(size_bits: int, rate_bps) -> Rat:
    return Rat(size_bits) / Rat(rate_bps)


class Link:
    """One direction of a cable: egress queues at the sender plus the wire."""

    __slots__ = (
        "name",
        "dst",
        "rate",
        "busy_until",
        "queues",
        "_priorities",
        "_enqueue_seq",
        "_wake",
        "wake_seq",
    )

    def __init__(self, name: str, dst, rate_bps):
        self.name = name
        self.dst = dst
        self.rate = Rat(rate_bps)
        if self.rate <= 0:
            raise ValueError("link rate must be positive")
        self.busy_until = ZERO
        self.queues: dict[int, list] = {}
        self._priorities: tuple[int, ...] = ()
        self._enqueue_seq = 0
        self._wake = None
        self.wake_seq = 0

    def enqueue(self, sim: Simulation, frame: Frame, release: Rat) -> None:
        q = self.queues.get(frame.priority)
        if q is None:
            q = self.queues[frame.priority] = []
            self._priorities = tuple(sorted(self.queues, reverse=True))
        heapq.heappush(q, (release, self._enqueue_seq, frame))
        self._enqueue_seq += 1
        self.try_start(sim)

    def queued_frames(self):
        for q in self.queues.values():
            for _, _, frame in q:
                yield frame

    def try_start(self, sim: Simulation) -> None:
        if self.busy_until > sim.now:
            return
        earliest_release = None
        for prio in self._priorities:
            q = self.queues[prio]
            if not q:
                continue
            release, _, frame = q[0]
            if release <= sim.now:
                heapq.heappop(q)
                self._transmit(sim, frame)
                return
            if earliest_release is None or release < earliest_release:
                earliest_release = release
        if earliest_release is not None:
            self._arm_wake(sim, earliest_release)

    def _transmit(self, sim: Simulation, frame: Frame) -> None:
        self.busy_until = sim.now + transmit_duration(frame.size_bits, self.rate)
        self.wake_seq += 1  # any armed wake is now stale
        if self._wake is not None:
            sim.cancel(self._wake)
            self._wake = None
        sim.schedule(self.busy_until, TX_COMPLETE, self, frame)

    def _arm_wake(self, sim: Simulation, at: Rat) -> None:
        if self._wake is not None and not self._wake.cancelled:
            if self._wake.fire_time <= at:
                return
            sim.cancel(self._wake)
        self._wake = sim.schedule(at, EGRESS_WAKE, self, self.wake_seq)

    def handle_event(self, sim: Simulation, event) -> None:
        if event.kind == TX_COMPLETE:
            frame = event.data
            sim.schedule(
                sim.now + self.dst.proc_delay, FRAME_ARRIVAL, self.dst, (frame, self)
            )
            self.try_start(sim)
        elif event.kind == EGRESS_WAKE:
            if event.data != self.wake_seq:
                return  # a transmission started since this wake was armed
            self._wake = None
            self.try_start(sim)
        else:
            raise AssertionError(f"link got unexpected event kind {event.kind}")


@dataclass(slots=True)
class ShaperBinding:
    scheduler: AtsScheduler
    group: SchedulerGroup


class SwitchNode:
    """Ingress pipeline plus forwarding; egress lives on the out-links."""

    __slots__ = (
        "name",
        "proc_delay",
        "recorder",
        "forwarding",
        "schedulers",
        "post_recovery",
        "recovery",
        "splits",
        "loss_filters",
    )

    def __init__(self, name: str, proc_delay, recorder: Recorder):
        self.name = name
        self.proc_delay = Rat(proc_delay)
        self.recorder = recorder
        # (stream_id, member) -> Link; member None matches unsplit frames
        self.forwarding: dict[tuple[str, object], Link] = {}
        # (ingress link name, stream_id) -> ShaperBinding
        self.schedulers: dict[tuple[str, str], ShaperBinding] = {}
        # stream_id -> ShaperBinding, applied after recovery
        self.post_recovery: dict[str, ShaperBinding] = {}
        self.recovery: dict[str, RecoveryState] = {}
        self.splits: dict[str, tuple] = {}
        # (ingress link name, stream_id) -> LossFilterState
        self.loss_filters: dict[tuple[str, str], LossFilterState] = {}

    def handle_event(self, sim: Simulation, event) -> None:
        if event.kind != FRAME_ARRIVAL:
            raise AssertionError(f"switch got unexpected event kind {event.kind}")
        frame, in_link = event.data
        self.ingress(sim, frame, in_link.name)

    def ingress(self, sim: Simulation, frame: Frame, in_port: str) -> None:
        t = sim.now
        self.recorder.note_arrival(self.name, frame)

        lf = self.loss_filters.get((in_port, frame.stream_id))
        if lf is not None and not lf.admit():
            self.recorder.frame_dropped(frame, DROP_FILTER)
            return

        release = t
        binding = self.schedulers.get((in_port, frame.stream_id))
        if binding is not None:
            decision = assign_eligibility(
                binding.scheduler, binding.group, t, frame.size_bits
            )
            if not decision.eligible:
                self.recorder.frame_dropped(frame, DROP_SHAPER)
                return
            release = decision.eligibility_time

        rec = self.recovery.get(frame.stream_id)
        if rec is not None and not recover(rec, frame):
            self.recorder.frame_dropped(frame, DROP_ELIMINATED)
            return

        post = self.post_recovery.get(frame.stream_id)
        if post is not None:
            decision = assign_eligibility(
                post.scheduler, post.group, t, frame.size_bits
            )
            if not decision.eligible:
                self.recorder.frame_dropped(frame, DROP_SHAPER)
                return
            if decision.eligibility_time > release:
                release = decision.eligibility_time

        members = self.splits.get(frame.stream_id)
        if members is not None and frame.member is None:
            copies = split(frame, members)
            self.recorder.frame_replicated(frame, len(copies) - 1)
            for copy_ in copies:
                self._forward(sim, copy_, release)
        else:
            self._forward(sim, frame, release)

    def _forward(self, sim: Simulation, frame: Frame, release: Rat) -> None:
        link = self.forwarding.get((frame.stream_id, frame.member))
        if link is None and frame.member is not None:
            link = self.forwarding.get((frame.stream_id, None))
        if link is None:
            self.recorder.frame_dropped(frame, DROP_MISCONFIG)
            return
        link.enqueue(sim, frame, release)


class SourceState:
    """Per-stream emission bookkeeping on a device."""

    __slots__ = ("spec", "rng", "last_emission")

    def __init__(self, spec: StreamSpec, rng):
        self.spec = spec
        self.rng = rng
        self.last_emission = None


class DeviceNode:
    """End station: emits its streams and terminates frames addressed to it.

    Jittered emission times are clamped to stay strictly increasing per
    stream (one nanosecond past the previous emission at minimum), since
    a talker cannot put frame n on the wire before frame n-1.
    """

    __slots__ = ("name", "proc_delay", "recorder", "sources", "out_link", "schedulers")

    def __init__(self, name: str, recorder: Recorder):
        self.name = name
        self.proc_delay = ZERO
        self.recorder = recorder
        self.sources: dict[str, SourceState] = {}
        self.out_link: Link | None = None
        self.schedulers: dict[str, ShaperBinding] = {}

    def add_source(self, sim: Simulation, spec: StreamSpec, rng) -> None:
        state = SourceState(spec, rng)
        self.sources[spec.stream_id] = state
        self._schedule_period(sim, state, 0)

    def _schedule_period(self, sim: Simulation, state: SourceState, k: int) -> None:
        for raw_time, frame in emit(state.spec, k, state.rng):
            t = raw_time
            if state.last_emission is not None and t <= state.last_emission:
                t = state.last_emission + NANOSECOND
            state.last_emission = t
            frame.produced = t
            sim.schedule(t, EMISSION_DUE, self, ("frame", frame))
        next_start = state.spec.start + Rat(k + 1) * state.spec.period
        sim.schedule(next_start, EMISSION_DUE, self, ("period", state, k + 1))

    def handle_event(self, sim: Simulation, event) -> None:
        if event.kind == EMISSION_DUE:
            tag = event.data[0]
            if tag == "period":
                _, state, k = event.data
                self._schedule_period(sim, state, k)
            else:
                _, frame = event.data
                self._emit_frame(sim, frame)
        elif event.kind == FRAME_ARRIVAL:
            frame, _ = event.data
            self.recorder.frame_delivered(frame, sim.now)
        else:
            raise AssertionError(f"device got unexpected event kind {event.kind}")

    def _emit_frame(self, sim: Simulation, frame: Frame) -> None:
        self.recorder.frame_emitted(frame)
        if self.out_link is None:
            self.recorder.frame_dropped(frame, DROP_MISCONFIG)
            return
        release = sim.now
        binding = self.schedulers.get(frame.stream_id)
        if binding is not None:
            decision = assign_eligibility(
                binding.scheduler, binding.group, sim.now, frame.size_bits
            )
            if not decision.eligible:
                self.recorder.frame_dropped(frame, DROP_SHAPER)
                return
            release = decision.eligibility_time
        self.out_link.enqueue(sim, frame, release)
