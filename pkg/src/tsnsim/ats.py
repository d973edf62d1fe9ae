"""Asynchronous traffic shaping: per-stream token buckets that assign
eligibility times instead of gating transmission directly.

A scheduler owns one token bucket (committed information rate `cir` in
bits/s, committed burst size `cbs` in bits).  Schedulers are collected into
groups; a group remembers the most recent eligibility time it has handed
out, and no member may assign an earlier one.  With the standard grouping
(one group per ingress port and priority) this preserves FIFO order among
frames that share a port, which is the property the whole mechanism leans
on and the one that breaks when merged streams share a group.

Token state is a single rational, `bucket_empty_time`: the instant at which
the level was (or will be) exactly zero.  The level at any time t is then
min(cbs, cir * (t - bucket_empty_time)), exact at every rational t, and a
frame's tokens are deducted effective at its eligibility time by advancing
bucket_empty_time.  Frames whose eligibility would exceed the arrival by
more than the group's max residence time are dropped with no state change
at all: no tokens are taken and the group time does not move.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .rational import Rat, ZERO


@dataclass(slots=True)
class EligibilityDecision:
    eligible: bool
    eligibility_time: Any = None  # Rat when eligible, None when dropped


class AtsScheduler:
    """Token-bucket state for one shaped entity (usually one stream)."""

    __slots__ = ("cir", "cbs", "bucket_empty_time", "name")

    def __init__(self, cir, cbs: int, name: str = ""):
        if cir <= 0 or cbs <= 0:
            raise ValueError("cir and cbs must be positive")
        self.cir = Rat(cir)
        self.cbs = cbs
        # Full bucket at t=0: the level reaches cbs exactly at time 0.
        self.bucket_empty_time = -(Rat(cbs) / self.cir)
        self.name = name

    def token_level(self, t):
        """Level at time t; pure observation.

        May report a negative value between a commit and its (future)
        eligibility time, because tokens are deducted effective at the
        eligibility instant.  At every commit instant the level is within
        [0, cbs].
        """
        return min(Rat(self.cbs), self.cir * (Rat(t) - self.bucket_empty_time))


@dataclass(slots=True)
class SchedulerGroup:
    """Shared ordering constraint across one or more schedulers.

    mrt is the max residence time: the largest allowed gap between a
    frame's arrival and its assigned eligibility.  None means unlimited.
    """

    mrt: Any = None
    group_eligibility_time: Any = field(default_factory=lambda: ZERO)
    name: str = ""


def assign_eligibility(
    scheduler: AtsScheduler, group: SchedulerGroup, arrival_time, frame_size: int
) -> EligibilityDecision:
    """Decide one frame: Eligible(time) or Dropped.

    Caller guarantees frames reach a group in non-decreasing arrival order
    (ingress is FIFO per port) and frame_size <= cbs (checked at scenario
    load).
    """
    tokens_ready = scheduler.bucket_empty_time + Rat(frame_size) / scheduler.cir
    candidate = max(arrival_time, tokens_ready, group.group_eligibility_time)
    if group.mrt is not None and candidate - arrival_time > group.mrt:
        return EligibilityDecision(False)
    level = scheduler.token_level(candidate)
    scheduler.bucket_empty_time = candidate - (level - frame_size) / scheduler.cir
    group.group_eligibility_time = candidate
    return EligibilityDecision(True, candidate)
