"""Event-loop ordering, cancellation, clock semantics, determinism."""

import random

import pytest

from tsnsim.kernel import Simulation
from tsnsim.rational import Rat, rat

US = Rat(1, 10**6)


def test_schedule_on_empty_queue():
    sim = Simulation()
    sim.schedule(Rat(0), "emission-due", lambda s, e: None)
    assert len(sim) == 1


def test_equal_fire_times_dispatch_in_insertion_order():
    sim = Simulation()
    seen = []
    sim.schedule(5 * US, "frame-arrival", lambda s, e: seen.append("first"))
    sim.schedule(5 * US, "frame-arrival", lambda s, e: seen.append("second"))
    sim.schedule(2 * US, "frame-arrival", lambda s, e: seen.append("earlier"))
    sim.run(10 * US)
    assert seen == ["earlier", "first", "second"]


def test_cancel_before_firing():
    sim = Simulation()
    seen = []
    ev = sim.schedule(5 * US, "frame-arrival", lambda s, e: seen.append("cancelled"))
    sim.schedule(6 * US, "frame-arrival", lambda s, e: seen.append("kept"))
    sim.cancel(ev)
    count = sim.run(10 * US)
    assert seen == ["kept"]
    assert count == 1  # cancelled events are not counted as dispatched


def test_scheduling_in_past_rejected():
    sim = Simulation()
    sim.schedule(5 * US, "frame-arrival", lambda s, e: None)
    sim.run(10 * US)
    assert sim.now == 5 * US
    with pytest.raises(ValueError):
        sim.schedule(4 * US, "frame-arrival", lambda s, e: None)


def test_clock_is_min_of_until_and_last_fire():
    sim = Simulation()
    sim.schedule(3 * US, "frame-arrival", lambda s, e: None)
    sim.schedule(20 * US, "frame-arrival", lambda s, e: None)
    sim.run(10 * US)
    assert sim.now == 10 * US  # events remain beyond the horizon
    sim.run(30 * US)
    assert sim.now == 20 * US  # queue exhausted early; clock stays at last fire


def test_run_until_zero_dispatches_only_t0():
    sim = Simulation()
    seen = []
    sim.schedule(Rat(0), "emission-due", lambda s, e: seen.append(0))
    sim.schedule(1 * US, "emission-due", lambda s, e: seen.append(1))
    assert sim.run(Rat(0)) == 1
    assert seen == [0]


def test_handlers_may_schedule_more_events():
    sim = Simulation()
    seen = []

    def chain(s, e):
        seen.append(s.now)
        if len(seen) < 4:
            s.schedule(s.now + 2 * US, "emission-due", chain)

    sim.schedule(Rat(0), "emission-due", chain)
    sim.run(rat(1, 1000))
    assert seen == [0, 2 * US, 4 * US, 6 * US]


def _random_run(seed):
    sim = Simulation(trace=True)
    rng = random.Random(seed)

    def handler(s, e):
        for _ in range(rng.randrange(3)):
            s.schedule(
                s.now + rat(rng.randrange(1, 1000), 10**9),
                rng.choice(["frame-arrival", "transmission-complete", "emission-due"]),
                handler,
            )

    for _ in range(50):
        sim.schedule(rat(rng.randrange(1000), 10**9), "emission-due", handler)
    sim.run(rat(1, 10**3))
    return sim.trace


def test_identical_seeds_give_identical_event_traces():
    first = _random_run(42)
    second = _random_run(42)
    assert repr(first) == repr(second)
    assert len(first) > 50
