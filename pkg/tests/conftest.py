"""Shared fixtures: run each expensive scenario once, keep a digest.

The acceptance tests replay a handful of long simulations (10 s of
simulated time per synthetic-network case).  A session-scoped store runs
every requested (scenario, case, variant) exactly once and keeps a compact
digest instead of the whole recorder: verdicts, drop tallies, latency
extremes and distinct-value counts, a fingerprint of the delivered
latency table, and per-period release windows observed on the link into
the adversarial listener.

The terminal-summary hook prints one verdict line per acceptance
criterion after the run, keyed off the ``test_<tag>__`` naming convention
in test_acceptance.py.
"""

from __future__ import annotations

import hashlib
import re
import sys
from collections import Counter
from dataclasses import dataclass

import pytest

from tsnsim.engine import run
from tsnsim.rational import ns_string, to_ns
from tsnsim.scenarios import S4_SET_MRT, Solution, apply_solution, build_scenario
from tsnsim.switch import Link

# Beyond this many distinct latency values per stream the digest stops
# counting; tests that care about value sets only look at tiny ones.
DISTINCT_CAP = 512


@dataclass(slots=True)
class RunDigest:
    name: str
    case: str
    variant: str
    summary: dict
    verdicts: dict       # stream -> BoundednessVerdict
    order_failures: list
    verdict_failures: list
    delivered: dict      # stream -> delivered frame count
    drops: dict          # stream -> {cause: count}
    min_latency: dict    # stream -> Rat seconds
    max_latency: dict    # stream -> Rat seconds
    latency_values: dict  # stream -> Counter of Rat latencies, None past cap
    fingerprint: str     # sha256 over sorted delivered (stream, seq, latency)
    final_link_windows: dict | None  # period -> [count, min_ns, max_ns]


def _digest(name, case, variant, result, releases) -> RunDigest:
    delivered = {}
    drops = {}
    min_latency = {}
    max_latency = {}
    values = {}
    for sid, stats in sorted(result.recorder.streams.items()):
        delivered[sid] = stats.delivered
        drops[sid] = dict(stats.drops)
        lat = stats.latencies()
        if lat:
            min_latency[sid] = min(lat)
            max_latency[sid] = max(lat)
            counter = Counter(lat)
            values[sid] = counter if len(counter) <= DISTINCT_CAP else None

    lines = sorted(
        (sid, seq, ns_string(t - produced))
        for sid, seq, produced, t, cause in result.rows
        if cause is None
    )
    blob = "\n".join(f"{sid},{seq},{lat}" for sid, seq, lat in lines)

    windows = None
    if releases is not None:
        # Two frames per stream per period, so seq // 2 is the period index.
        windows = {}
        for _, seq, release in releases:
            ns = to_ns(release)
            entry = windows.get(seq // 2)
            if entry is None:
                windows[seq // 2] = [1, ns, ns]
            else:
                entry[0] += 1
                if ns < entry[1]:
                    entry[1] = ns
                if ns > entry[2]:
                    entry[2] = ns

    return RunDigest(
        name=name,
        case=case,
        variant=variant,
        summary=result.summary,
        verdicts=result.verdicts,
        order_failures=result.order_failures,
        verdict_failures=result.verdict_failures,
        delivered=delivered,
        drops=drops,
        min_latency=min_latency,
        max_latency=max_latency,
        latency_values=values,
        fingerprint=hashlib.sha256(blob.encode()).hexdigest(),
        final_link_windows=windows,
    )


class DigestStore:
    """Lazily runs scenarios, memoizing one digest per variant."""

    def __init__(self):
        self._cache: dict[tuple, RunDigest] = {}

    def get(self, name, case, duration=None, mrt=None) -> RunDigest:
        key = (
            name,
            case,
            None if duration is None else str(duration),
            None if mrt is None else str(mrt),
        )
        digest = self._cache.get(key)
        if digest is None:
            digest = self._cache[key] = self._run(name, case, duration, mrt)
        return digest

    def all(self):
        return list(self._cache.values())

    def _run(self, name, case, duration, mrt) -> RunDigest:
        config = build_scenario(name, case)
        variant = ""
        if mrt is not None:
            config = apply_solution(config, Solution(S4_SET_MRT, mrt))
            variant = f"mrt={ns_string(mrt)}ns"
        print(f"[scenario run] {name}/{case} {variant}", file=sys.stderr, flush=True)

        capture_releases = (
            case == "b" and name in ("netA", "netB", "netC") and mrt is None
        )
        if not capture_releases:
            return _digest(name, case, variant, run(config, duration=duration), None)

        # Frames bound for the adversarial listener are enqueued with their
        # assigned eligibility time as the release; log those.
        releases = []
        original = Link.enqueue

        def spy(link, sim, frame, release):
            if link.dst.name == "listener":
                releases.append((frame.stream_id, frame.seq, release))
            original(link, sim, frame, release)

        Link.enqueue = spy
        try:
            result = run(config, duration=duration)
        finally:
            Link.enqueue = original
        return _digest(name, case, variant, result, releases)


@pytest.fixture(scope="session")
def digests() -> DigestStore:
    return DigestStore()


# ---------------------------------------------------------------------------
# acceptance summary

CRITERIA = (
    ("a1", "A1  adversarial arrival order at the final switch"),
    ("a2", "A2  per-period eligibility span on the final switch"),
    ("a3", "A3  latency growth rate under a shared shaper group"),
    ("a4", "A4  unshaped and per-stream-group baselines"),
    ("a5", "A5  shaping on every hop"),
    ("a6", "A6  raised cir/cbs on the final switch"),
    ("a7", "A7  shaper removal after the merge"),
    ("a8", "A8  residence-time limit: plateau, drops, verdict"),
    ("a8_tiny", "A8* residence limits of 0/1 us drop all three streams"),
    ("a9", "A9  eligibility matches the 1 ns stepping oracle"),
    ("a10", "A10 recovery forwarding order and frame conservation"),
    ("a11", "A11 ring case study: verdicts, maxima, shared minima"),
    ("a12", "A12 byte-identical reruns"),
)

_ACCEPT_RE = re.compile(r"test_acceptance\.py::test_(a\d+[a-z_]*?)__")
_outcomes: dict[str, str] = {}


def pytest_runtest_logreport(report):
    match = _ACCEPT_RE.search(report.nodeid)
    if match is None:
        return
    tag = match.group(1)
    if report.outcome == "failed":
        _outcomes[tag] = "FAIL"
    elif report.when == "call" and report.outcome == "passed":
        _outcomes.setdefault(tag, "PASS")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    seen = [(tag, label) for tag, label in CRITERIA if tag in _outcomes]
    if not seen:
        return
    terminalreporter.section("acceptance criteria")
    for tag, label in seen:
        terminalreporter.write_line(f"{_outcomes[tag]:<4}  {label}")
