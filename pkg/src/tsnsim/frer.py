"""Frame replication and elimination.

A replicated stream's copies share (stream_id, seq); the split point sends
one copy down each member path and the recovery point forwards the first
copy of each sequence number it sees, discarding the rest.  Because member
paths have different delays, the merged stream can leave recovery out of
production order; that non-FIFO output is a property, not a bug, and is
what downstream shaping trips over.

The loss filter is a deterministic every-second-frame dropper used to force
recovery onto alternating paths; determinism (rather than random loss) is
required for the adversarial pattern to repeat each period.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field


@dataclass(slots=True)
class RecoveryState:
    """First-seen-wins duplicate elimination over a sliding window.

    The window is measured in sequence numbers below the highest accepted
    one.  Sequence numbers older than the window are treated as stale and
    discarded; none of the built-in scenarios produce skew anywhere near
    the default window.
    """

    history_window: int = 64
    accepted: set = field(default_factory=set)
    highest: int | None = None
    forwarded_count: int = 0
    discarded_count: int = 0


def recover(state: RecoveryState, frame) -> bool:
    """True to forward the frame, False to discard it as a duplicate."""
    seq = frame.seq
    floor = None if state.highest is None else state.highest - state.history_window
    if seq in state.accepted or (floor is not None and seq <= floor):
        state.discarded_count += 1
        return False
    state.accepted.add(seq)
    if state.highest is None or seq > state.highest:
        state.highest = seq
        cutoff = state.highest - state.history_window
        if len(state.accepted) > 2 * state.history_window:
            state.accepted = {s for s in state.accepted if s > cutoff}
    state.forwarded_count += 1
    return True


def split(frame, members: list) -> list:
    """One copy of the frame per member path, identical tag and payload."""
    if not members:
        raise ValueError(
            f"stream {frame.stream_id}: split with no member paths is a "
            "configuration error"
        )
    copies = []
    for member in members:
        dup = copy.copy(frame)
        dup.member = member
        copies.append(dup)
    return copies


@dataclass(slots=True)
class LossFilterState:
    """Deterministic alternating dropper for one (link, stream) pair."""

    drop_first: bool = True
    count: int = 0
    dropped_count: int = 0

    def admit(self) -> bool:
        index = self.count
        self.count += 1
        drop = (index % 2 == 0) == self.drop_first
        if drop:
            self.dropped_count += 1
        return not drop
