"""Assemble a runtime network from a scenario config and run it.

The engine owns everything that happens around a run: node and link
construction, shaper wiring, per-stream RNG derivation, the conservation
check against frames still queued or in flight at the cutoff, latency
floors (no frame may beat the sum of its transmission times), boundedness
classification, and the scenario's own assertions (arrival order at a
watched switch, expected verdicts).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ats import AtsScheduler, SchedulerGroup
from .frer import LossFilterState, RecoveryState
from .kernel import FRAME_ARRIVAL, TX_COMPLETE, Simulation
from .metrics import BoundednessVerdict, Recorder, boundedness, summarize
from .rational import Rat, ns_string
from .scenarios import POST_RECOVERY_PORT, ScenarioConfig, validate
from .switch import DeviceNode, Link, ShaperBinding, SwitchNode, transmit_duration


@dataclass(slots=True)
class Network:
    sim: Simulation
    recorder: Recorder
    nodes: dict
    links: dict


@dataclass(slots=True)
class RunResult:
    config: ScenarioConfig
    recorder: Recorder
    duration: Rat
    verdicts: dict  # stream_id -> BoundednessVerdict
    order_failures: list
    verdict_failures: list
    summary: dict
    trace: list | None

    @property
    def rows(self):
        return self.recorder.rows

    def assertions_hold(self) -> bool:
        return not self.order_failures and not self.verdict_failures


def build_network(config: ScenarioConfig, seed=None, trace: bool = False) -> Network:
    validate(config)
    sim = Simulation(trace=trace)
    recorder = Recorder()

    nodes: dict[str, object] = {}
    for nc in config.nodes:
        if nc.kind == "switch":
            nodes[nc.name] = SwitchNode(nc.name, nc.proc_delay, recorder)
        else:
            nodes[nc.name] = DeviceNode(nc.name, recorder)

    links: dict[str, Link] = {}
    for ls in config.links:
        link = Link(ls.name, nodes[ls.dst], ls.rate)
        links[ls.name] = link
        src = nodes[ls.src]
        if isinstance(src, DeviceNode):
            src.out_link = link

    for f in config.forwarding:
        nodes[f.switch].forwarding[(f.stream_id, f.member)] = links[f.link]

    for nc in config.nodes:
        node = nodes[nc.name]
        groups = {
            g.name: SchedulerGroup(mrt=g.mrt, name=g.name) for g in nc.groups
        }
        for s in nc.schedulers:
            sched = AtsScheduler(s.cir, s.cbs, name=f"{nc.name}:{s.port}:{s.stream_id}")
            binding = ShaperBinding(sched, groups[s.group])
            if nc.kind == "device":
                node.schedulers[s.stream_id] = binding
            elif s.port == POST_RECOVERY_PORT:
                node.post_recovery[s.stream_id] = binding
            else:
                node.schedulers[(s.port, s.stream_id)] = binding
        for sid in nc.recovery:
            node.recovery[sid] = RecoveryState()
        for sp in nc.splits:
            node.splits[sp.stream_id] = sp.members
        for lf in nc.loss_filters:
            node.loss_filters[(lf.port, lf.stream_id)] = LossFilterState(lf.drop_first)

    if config.assertions.order is not None:
        recorder.watch_order(
            config.assertions.order.switch, set(config.assertions.order.pattern)
        )

    effective_seed = config.seed if seed is None else seed
    for spec in config.streams:
        rng = random.Random(f"{effective_seed}/{spec.stream_id}")
        nodes[spec.source].add_source(sim, spec, rng)

    return Network(sim=sim, recorder=recorder, nodes=nodes, links=links)


def _residual_frames(net: Network):
    """Frames produced but neither delivered nor dropped at the cutoff.

    They sit in egress queues, on the wire (pending transmission-complete),
    or in a processing gap (pending frame-arrival).  Emissions scheduled
    but not yet due are not produced yet and do not count.
    """
    frames = []
    for link in net.links.values():
        frames.extend(link.queued_frames())
    for ev in net.sim.pending_events():
        if ev.kind == TX_COMPLETE:
            frames.append(ev.data)
        elif ev.kind == FRAME_ARRIVAL:
            frames.append(ev.data[0])
    return frames


def _min_path_transmission(config: ScenarioConfig, spec) -> Rat:
    """Least total transmission time over the stream's member paths."""
    link_by_name = {l.name: l for l in config.links}
    out_links: dict[str, list] = {}
    for link in config.links:
        out_links.setdefault(link.src, []).append(link)
    splits = {
        (n.name, sp.stream_id): sp.members for n in config.nodes for sp in n.splits
    }
    fwd = {(f.switch, f.stream_id, f.member): f.link for f in config.forwarding}

    first = out_links[spec.source][0]
    size = spec.frame_size_bits
    best = None
    frontier = [(first, None, transmit_duration(size, first.rate))]
    hops = 0
    while frontier and hops < 64:
        hops += 1
        nxt = []
        for link, member, acc in frontier:
            if link.dst == spec.destination:
                if best is None or acc < best:
                    best = acc
                continue
            here = link.dst
            key = (here, spec.stream_id)
            if key in splits and member is None:
                branches = [(m, fwd.get((here, spec.stream_id, m))) for m in splits[key]]
            else:
                out = fwd.get((here, spec.stream_id, member))
                if out is None:
                    out = fwd.get((here, spec.stream_id, None))
                branches = [(member, out)]
            for m, out in branches:
                if out is None:
                    continue
                nlink = link_by_name[out]
                nxt.append((nlink, m, acc + transmit_duration(size, nlink.rate)))
        frontier = nxt
    if best is None:
        raise AssertionError(f"{spec.stream_id}: no path to {spec.destination}")
    return best


def _check_latency_floors(config: ScenarioConfig, recorder: Recorder) -> None:
    for spec in config.streams:
        stats = recorder.streams.get(spec.stream_id)
        if stats is None or not stats.delivered_time:
            continue
        floor = _min_path_transmission(config, spec)
        for produced, delivered in zip(stats.delivered_produced, stats.delivered_time):
            if delivered - produced < floor:
                raise AssertionError(
                    f"{spec.stream_id}: latency {ns_string(delivered - produced)}ns "
                    f"below the transmission-time floor {ns_string(floor)}ns"
                )


def _check_order(config: ScenarioConfig, recorder: Recorder) -> list:
    """Compare the watched switch's arrival log against the per-period pattern."""
    order = config.assertions.order
    if order is None:
        return []
    log = recorder.order_log.get(order.switch, [])
    pattern = order.pattern
    per_stream = {sid: pattern.count(sid) for sid in set(pattern)}
    # occurrence index of each pattern position within its stream
    occurrence = []
    seen: dict[str, int] = {}
    for sid in pattern:
        occurrence.append(seen.get(sid, 0))
        seen[sid] = seen.get(sid, 0) + 1

    failures = []
    for i, (stream_id, seq) in enumerate(log):
        period, pos = divmod(i, len(pattern))
        want_stream = pattern[pos]
        want_seq = period * per_stream[want_stream] + occurrence[pos]
        if stream_id != want_stream or seq != want_seq:
            failures.append(
                f"{order.switch} entry {i}: expected {want_stream} seq {want_seq}, "
                f"saw {stream_id} seq {seq}"
            )
            if len(failures) >= 5:
                failures.append("further mismatches suppressed")
                break
    if not log:
        failures.append(f"{order.switch}: no watched arrivals recorded")
    return failures


def run(
    config: ScenarioConfig,
    duration=None,
    seed=None,
    trace: bool = False,
) -> RunResult:
    net = build_network(config, seed=seed, trace=trace)
    until = config.duration if duration is None else duration
    net.sim.run(until)

    net.recorder.check_conservation(_residual_frames(net))
    _check_latency_floors(config, net.recorder)

    verdicts: dict[str, BoundednessVerdict] = {}
    for spec in config.streams:
        stats = net.recorder.streams.get(spec.stream_id)
        if stats is None:
            continue
        verdicts[spec.stream_id] = boundedness(
            stats.delivered_produced,
            stats.latencies(),
            until,
            bounded_threshold=config.bounded_threshold,
            unbounded_threshold=config.unbounded_threshold,
        )

    order_failures = _check_order(config, net.recorder)
    verdict_failures = []
    for stream_id, expected in config.assertions.verdicts:
        got = verdicts.get(stream_id)
        if got is None or got.verdict != expected:
            verdict_failures.append(
                f"{stream_id}: expected {expected}, got "
                f"{'no result' if got is None else got.verdict}"
            )

    summary = {
        "scenario": config.name,
        "case": config.case,
        "duration_ns": ns_string(until),
        "seed": config.seed if seed is None else seed,
        "events_dispatched": net.sim.dispatched,
        "streams": {},
        "assertions": {
            "order_failures": list(order_failures),
            "verdict_failures": list(verdict_failures),
            "hold": not order_failures and not verdict_failures,
        },
    }
    for stream_id, stats in sorted(net.recorder.streams.items()):
        entry = summarize(stats)
        v = verdicts.get(stream_id)
        if v is not None:
            entry["verdict"] = v.verdict
            entry["latency_slope"] = v.slope
            entry["fitted_records"] = v.fitted_records
        summary["streams"][stream_id] = entry

    return RunResult(
        config=config,
        recorder=net.recorder,
        duration=until,
        verdicts=verdicts,
        order_failures=order_failures,
        verdict_failures=verdict_failures,
        summary=summary,
        trace=net.sim.trace,
    )
