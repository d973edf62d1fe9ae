"""Deterministic discrete-event kernel.

Events are totally ordered by (fire_time, insertion_index): ties in fire
time dispatch in scheduling order, so the loop is FIFO among simultaneous
events.  The clock is an exact rational and never decreases; scheduling in
the past raises.  No fixed time step exists, the clock only moves to event
fire times.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Any

from .rational import ZERO

# Event kinds.  The engine uses exactly these; the kernel itself treats the
# kind as an opaque label carried into the trace.
FRAME_ARRIVAL = "frame-arrival"
TX_COMPLETE = "transmission-complete"
EMISSION_DUE = "emission-due"
EGRESS_WAKE = "egress-wake"


@dataclass(slots=True)
class Event:
    fire_time: Any
    seq: int
    kind: str
    target: Any
    data: Any = None
    cancelled: bool = False


class Simulation:
    """Single-threaded event loop with an exact rational clock.

    Targets are either callables invoked as target(sim, event) or objects
    with a handle_event(sim, event) method.  schedule() returns the Event,
    which doubles as the cancellation handle.
    """

    def __init__(self, trace: bool = False):
        self.now = ZERO
        self.dispatched = 0
        self._queue: list[tuple[Any, int, Event]] = []
        self._seq = 0
        self.trace: list[tuple[Any, int, str, str]] | None = [] if trace else None

    def schedule(self, fire_time, kind: str, target, data=None) -> Event:
        if fire_time < self.now:
            raise ValueError(
                f"cannot schedule {kind} at {fire_time} before current clock {self.now}"
            )
        ev = Event(fire_time, self._seq, kind, target, data)
        self._seq += 1
        heapq.heappush(self._queue, (fire_time, ev.seq, ev))
        return ev

    def cancel(self, event: Event) -> None:
        """Mark an event dead; it is skipped (uncounted) when popped."""
        event.cancelled = True

    def run(self, until) -> int:
        """Dispatch every event with fire_time <= until, in total order.

        Returns the number of events dispatched by this call.  Afterwards
        the clock is min(until, fire time of the last dispatched event); an
        exhausted queue terminates the run early without advancing to
        `until`.
        """
        count = 0
        queue = self._queue
        trace = self.trace
        while queue:
            fire_time = queue[0][0]
            if fire_time > until:
                self.now = until
                break
            _, _, ev = heapq.heappop(queue)
            if ev.cancelled:
                continue
            self.now = fire_time
            count += 1
            if trace is not None:
                trace.append((fire_time, ev.seq, ev.kind, getattr(ev.target, "name", "")))
            target = ev.target
            if callable(target):
                target(self, ev)
            else:
                target.handle_event(self, ev)
        self.dispatched += count
        return count

    def pending_events(self):
        """Undispatched, uncancelled events, in no particular order."""
        return (ev for _, _, ev in self._queue if not ev.cancelled)

    def __len__(self) -> int:
        return len(self._queue)
