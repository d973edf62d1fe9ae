"""Scenario catalogue: three synthetic reordering networks and a zonal ring.

The synthetic networks share one traffic pattern: three shaped streams
(blue, red, orange) emit two frames per 140 us period, 50 us apart within
a stream, sized so one frame costs exactly one token-bucket recovery
interval.  Each network arranges for the second blue frame to reach the
final switch shortly after the first, compressing the pattern so that a
shared scheduler group at the final switch accumulates delay without
bound:

- netA: blue is replicated over a long path (four transit switches) and a
  short path (one switch) whose loss filter drops every second copy; the
  merge switch recombines them.  Red and orange ride the long path only.
- netB: no replication; blue rides the short path behind a green
  cross-traffic frame that leaves at the short-path switch.  Green shares
  blue's source device, so it also delays blue on the access link.
- netC: same mechanism as netB on a star: five transit switches on the
  long path (red and orange share one source device), two on the short.

Case ids select shaper placement and parameters: (a) no shaping,
(b) shaping at the final switch with one shared group, (c) per-stream
groups, (d)/(e) shaping on every switch, (f)/(g)/(h) doubled cir and/or
cbs at the final switch, (i) shaping after the merge removed, (j) a
1 ms max residence time at the final switch.

The ivn scenario is a four-switch ring (FL, FR, RR, RL) carrying two
jittered camera streams and four lidar streams to an ADAS unit on RR,
replicated both ways around the ring, recovered at RR, plus unshaped
cross traffic and a top-priority TDMA blocker.  Its baseline deliberately
places per-stream schedulers behind the recovery step in one shared
group; the s1s3 configuration removes them, and the s2 configuration
doubles the lidar burst allowance instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .rational import Rat, ZERO, ns_string, rat
from .traffic import AdversarialSpec, StreamSpec, expand_adversarial

SCHEMA_VERSION = 1

US = rat(1, 10**6)

PLACEMENT_NONE = "none"
PLACEMENT_LAST = "last-switch-only"
PLACEMENT_ALL = "all-switches"
PLACEMENT_NO_POST_MERGE = "all-except-after-merge"
PLACEMENTS = (PLACEMENT_NONE, PLACEMENT_LAST, PLACEMENT_ALL, PLACEMENT_NO_POST_MERGE)

GROUPING_STANDARD = "standard"
GROUPING_PER_STREAM = "per-stream-experimental"

POST_RECOVERY_PORT = "post-recovery"

SYNTHETIC_CASES = ("a", "b", "c", "d", "e", "f", "g", "h", "i", "j")
IVN_CASES = ("baseline", "s1s3", "s2")

# every (scenario, case) pair the builders accept
CASE_MATRIX = (
    *(("netA", c) for c in ("a", "b", "c", "d", "f", "g", "h", "i", "j")),
    *(("netB", c) for c in ("a", "b", "c", "e")),
    *(("netC", c) for c in ("a", "b", "c", "e")),
    *(("ivn", c) for c in IVN_CASES),
)


class ValidationError(ValueError):
    """Scenario config failed validation; message lists the paths."""


def us(n) -> Rat:
    return rat(n) * US


@dataclass(frozen=True)
class GroupSpec:
    name: str
    mrt: Rat | None = None  # None: no residence limit


@dataclass(frozen=True)
class SchedulerSpec:
    port: str  # ingress link name, "source" on devices, or "post-recovery"
    stream_id: str
    cir: Rat
    cbs: int
    group: str


@dataclass(frozen=True)
class SplitSpec:
    stream_id: str
    members: tuple


@dataclass(frozen=True)
class FilterSpec:
    port: str
    stream_id: str
    drop_first: bool = True


@dataclass(frozen=True)
class NodeConfig:
    name: str
    kind: str  # "switch" | "device"
    proc_delay: Rat = ZERO
    schedulers: tuple = ()
    groups: tuple = ()
    recovery: tuple = ()
    splits: tuple = ()
    loss_filters: tuple = ()
    allow_post_recovery_shaping: bool = False


@dataclass(frozen=True)
class LinkSpec:
    name: str
    src: str
    dst: str
    rate: int  # bits per second


@dataclass(frozen=True)
class ForwardSpec:
    switch: str
    stream_id: str
    member: int | None
    link: str


@dataclass(frozen=True)
class OrderAssertion:
    switch: str
    pattern: tuple  # expected stream-id sequence, repeated per period


@dataclass(frozen=True)
class AssertionSpec:
    order: OrderAssertion | None = None
    verdicts: tuple = ()  # (stream_id, expected verdict) pairs


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    case: str
    nodes: tuple
    links: tuple
    streams: tuple
    forwarding: tuple
    duration: Rat
    seed: int
    ats_placement: str
    grouping_mode: str
    parameter_overrides: tuple = ()  # (key, value) echo of applied tweaks
    bounded_threshold: float = 1e-4
    unbounded_threshold: float = 1e-2
    assertions: AssertionSpec = AssertionSpec()
    schema_version: int = SCHEMA_VERSION

    def node(self, name: str) -> NodeConfig:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)

    def stream(self, stream_id: str) -> StreamSpec:
        for s in self.streams:
            if s.stream_id == stream_id:
                return s
        raise KeyError(stream_id)


# ---------------------------------------------------------------------------
# validation

def validate_frame_fits(frame_size_bits: int, cbs: int, context: str) -> None:
    if frame_size_bits > cbs:
        raise ValidationError(
            f"{context}: frame size {frame_size_bits} exceeds cbs {cbs}; "
            "such a frame could never become eligible"
        )


def validate(config: ScenarioConfig) -> None:
    problems = []
    node_names = {n.name for n in config.nodes}
    link_by_name = {l.name: l for l in config.links}
    if len(link_by_name) != len(config.links):
        problems.append("links: duplicate link names")
    stream_ids = {s.stream_id for s in config.streams}

    if config.ats_placement not in PLACEMENTS:
        problems.append(f"ats_placement: unknown value {config.ats_placement!r}")
    if not config.bounded_threshold < config.unbounded_threshold:
        problems.append("thresholds: bounded_threshold must be below unbounded_threshold")

    out_links: dict[str, list] = {}
    for link in config.links:
        if link.src not in node_names or link.dst not in node_names:
            problems.append(f"links.{link.name}: endpoint not in nodes")
        out_links.setdefault(link.src, []).append(link)

    for spec in config.streams:
        if spec.source not in node_names:
            problems.append(f"streams.{spec.stream_id}: source {spec.source} missing")
        if spec.destination not in node_names:
            problems.append(
                f"streams.{spec.stream_id}: destination {spec.destination} missing"
            )
        if len(out_links.get(spec.source, [])) != 1:
            problems.append(
                f"streams.{spec.stream_id}: source {spec.source} needs exactly one "
                "outgoing link"
            )

    fwd: dict[tuple, str] = {}
    for f in config.forwarding:
        if f.switch not in node_names:
            problems.append(f"forwarding: unknown switch {f.switch}")
        if f.link not in link_by_name:
            problems.append(f"forwarding: unknown link {f.link}")
        if f.stream_id not in stream_ids:
            problems.append(f"forwarding: unknown stream {f.stream_id}")
        key = (f.switch, f.stream_id, f.member)
        if key in fwd:
            problems.append(f"forwarding: duplicate entry {key}")
        fwd[key] = f.link

    for node in config.nodes:
        group_names = {g.name for g in node.groups}
        if len(group_names) != len(node.groups):
            problems.append(f"nodes.{node.name}: duplicate group names")
        for sched in node.schedulers:
            ctx = f"nodes.{node.name}.schedulers[{sched.port}/{sched.stream_id}]"
            if sched.group not in group_names:
                problems.append(f"{ctx}: group {sched.group} not defined on the node")
            if node.kind == "device":
                if sched.port != "source":
                    problems.append(f"{ctx}: device schedulers use port 'source'")
            elif sched.port != POST_RECOVERY_PORT and sched.port not in link_by_name:
                problems.append(f"{ctx}: port is not a link name")
            if sched.stream_id not in stream_ids:
                problems.append(f"{ctx}: unknown stream")
            else:
                try:
                    validate_frame_fits(
                        config.stream(sched.stream_id).frame_size_bits, sched.cbs, ctx
                    )
                except ValidationError as exc:
                    problems.append(str(exc))
            if sched.port == POST_RECOVERY_PORT:
                if sched.stream_id not in node.recovery:
                    problems.append(
                        f"{ctx}: post-recovery scheduler without a recovery function"
                    )
                if not node.allow_post_recovery_shaping:
                    problems.append(
                        f"{ctx}: shaping after recovery must be explicitly allowed "
                        "(it is the known-bad placement)"
                    )
        for lf in node.loss_filters:
            if lf.port not in link_by_name:
                problems.append(
                    f"nodes.{node.name}.loss_filters[{lf.port}/{lf.stream_id}]: "
                    "port is not a link name"
                )
        for sp in node.splits:
            if config.stream(sp.stream_id).frer_enabled is False:
                problems.append(
                    f"nodes.{node.name}.splits.{sp.stream_id}: split of a stream "
                    "without replication enabled"
                )
        for stream_id in node.recovery:
            if config.stream(stream_id).frer_enabled is False:
                problems.append(
                    f"nodes.{node.name}.recovery.{stream_id}: recovery of a stream "
                    "without replication enabled"
                )

    # every stream must reach its destination by following the forwarding maps
    splits = {
        (n.name, sp.stream_id): sp.members for n in config.nodes for sp in n.splits
    }
    for spec in config.streams:
        sources = out_links.get(spec.source, [])
        if not sources:
            continue
        frontier = [(sources[0], None)]
        hops = 0
        reached = False
        while frontier and hops < 64:
            hops += 1
            next_frontier = []
            for link, member in frontier:
                dst = link.dst
                if dst == spec.destination:
                    reached = True
                    continue
                if dst not in node_names:
                    continue
                key = (dst, spec.stream_id)
                if key in splits and member is None:
                    for m in splits[key]:
                        out = fwd.get((dst, spec.stream_id, m))
                        if out is None:
                            problems.append(
                                f"routes.{spec.stream_id}: no forwarding for member "
                                f"{m} at {dst}"
                            )
                        else:
                            next_frontier.append((link_by_name[out], m))
                    continue
                out = fwd.get((dst, spec.stream_id, member))
                if out is None:
                    out = fwd.get((dst, spec.stream_id, None))
                if out is None:
                    problems.append(
                        f"routes.{spec.stream_id}: dead end at {dst} (member {member})"
                    )
                else:
                    next_frontier.append((link_by_name[out], member))
            frontier = next_frontier
        if not reached:
            problems.append(
                f"routes.{spec.stream_id}: destination {spec.destination} unreachable"
            )

    if problems:
        raise ValidationError("; ".join(problems))


# ---------------------------------------------------------------------------
# solutions

S1_ATS_ALL_HOPS = "ats-all-hops"
S2_INCREASE_CIR = "increase-cir"
S2_INCREASE_CBS = "increase-cbs"
S2_INCREASE_BOTH = "increase-both"
S3_NO_ATS_AFTER_MERGE = "no-ats-after-merge"
S4_SET_MRT = "set-mrt"

SOLUTION_KINDS = (
    S1_ATS_ALL_HOPS,
    S2_INCREASE_CIR,
    S2_INCREASE_CBS,
    S2_INCREASE_BOTH,
    S3_NO_ATS_AFTER_MERGE,
    S4_SET_MRT,
)


@dataclass(frozen=True)
class Solution:
    kind: str
    value: Rat | None = None  # mrt for set-mrt; factor otherwise (default 2)

    def __post_init__(self):
        if self.kind not in SOLUTION_KINDS:
            raise ValueError(f"unknown solution kind {self.kind!r}")
        if self.kind == S4_SET_MRT and self.value is None:
            raise ValueError("set-mrt needs a residence-time value")


# ---------------------------------------------------------------------------
# synthetic networks

ADV_FRAME_BITS = 1000
ADV_CIR = 20 * 10**6
ADV_CBS = 1000
SYN_LINK_RATE = 100 * 10**6
SYN_PROC = None  # set in _synthetic_base
GREEN_FRAME_BITS = 3000

ADVERSARIAL_STREAMS = ("blue", "red", "orange")


def _adversarial(beta: Rat, sources: dict, frer: dict) -> tuple:
    spec = AdversarialSpec(
        interval=us(50),
        period=us(140),
        blue_start=beta,
        red_offset_after_blue=us(20),
        orange_offset_after_red2=us(10),
        frame_size_bits=ADV_FRAME_BITS,
    )
    return expand_adversarial(
        spec, sources=sources, destination="listener", frer_enabled=frer
    )


def _chain_forwarding(switches, stream_ids, out_of):
    """(switch -> next link) entries for streams riding a linear chain."""
    entries = []
    for sw in switches:
        for sid in stream_ids:
            entries.append(ForwardSpec(sw, sid, None, out_of[sw]))
    return entries


def _scheduler_rows(port, stream_ids, group, cir=ADV_CIR, cbs=ADV_CBS):
    return tuple(
        SchedulerSpec(port, sid, Rat(cir), cbs, group) for sid in stream_ids
    )


def _last_switch_schedulers(in_port, grouping_mode, cir=ADV_CIR, cbs=ADV_CBS, mrt=None):
    """Schedulers for the final switch's single shaped ingress port."""
    if grouping_mode == GROUPING_PER_STREAM:
        groups = tuple(GroupSpec(f"s2:{sid}", mrt) for sid in ADVERSARIAL_STREAMS)
        scheds = tuple(
            SchedulerSpec(in_port, sid, Rat(cir), cbs, f"s2:{sid}")
            for sid in ADVERSARIAL_STREAMS
        )
    else:
        groups = (GroupSpec("s2:in", mrt),)
        scheds = _scheduler_rows(in_port, ADVERSARIAL_STREAMS, "s2:in", cir, cbs)
    return scheds, groups


ORDER_ADVERSARIAL = ("blue", "blue", "red", "red", "orange", "orange")
ORDER_PRODUCTION = ("blue", "red", "blue", "red", "orange", "orange")

VERDICTS_BOUNDED = tuple((sid, "Bounded") for sid in ADVERSARIAL_STREAMS)
VERDICTS_UNBOUNDED = tuple((sid, "Unbounded") for sid in ADVERSARIAL_STREAMS)


def _case_tuning(case: str):
    """Final-switch shaper parameters and overrides echo for a synthetic case."""
    cir, cbs, mrt = ADV_CIR, ADV_CBS, None
    overrides = []
    if case == "f":
        cir, cbs = 2 * ADV_CIR, 2 * ADV_CBS
        overrides = [("s2.cir", str(cir)), ("s2.cbs", str(cbs))]
    elif case == "g":
        cir = 2 * ADV_CIR
        overrides = [("s2.cir", str(cir))]
    elif case == "h":
        cbs = 2 * ADV_CBS
        overrides = [("s2.cbs", str(cbs))]
    elif case == "j":
        mrt = us(1000)
        overrides = [("s2.mrt", "1ms")]
    return cir, cbs, mrt, overrides


def _build_netA(case: str) -> ScenarioConfig:
    proc = us(5)
    long_chain = ["L1", "L2", "L3", "L4"]
    switch_names = ["s0", "S1"] + long_chain + ["s1", "s2"]
    devices = ["talker_blue", "talker_red", "talker_orange", "listener"]

    links = [
        LinkSpec("talker_blue->s0", "talker_blue", "s0", SYN_LINK_RATE),
        LinkSpec("talker_red->s0", "talker_red", "s0", SYN_LINK_RATE),
        LinkSpec("talker_orange->s0", "talker_orange", "s0", SYN_LINK_RATE),
        LinkSpec("s0->S1", "s0", "S1", SYN_LINK_RATE),
        LinkSpec("S1->s1", "S1", "s1", SYN_LINK_RATE),
        LinkSpec("s0->L1", "s0", "L1", SYN_LINK_RATE),
        LinkSpec("L1->L2", "L1", "L2", SYN_LINK_RATE),
        LinkSpec("L2->L3", "L2", "L3", SYN_LINK_RATE),
        LinkSpec("L3->L4", "L3", "L4", SYN_LINK_RATE),
        LinkSpec("L4->s1", "L4", "s1", SYN_LINK_RATE),
        LinkSpec("s1->s2", "s1", "s2", SYN_LINK_RATE),
        LinkSpec("s2->listener", "s2", "listener", SYN_LINK_RATE),
    ]

    blue, red, orange = _adversarial(
        ZERO,
        sources={
            "blue": "talker_blue",
            "red": "talker_red",
            "orange": "talker_orange",
        },
        frer={"blue": True},
    )
    streams = (blue, red, orange)

    forwarding = [
        # blue splits at s0: member 0 short, member 1 long
        ForwardSpec("s0", "blue", 0, "s0->S1"),
        ForwardSpec("s0", "blue", 1, "s0->L1"),
        ForwardSpec("s0", "red", None, "s0->L1"),
        ForwardSpec("s0", "orange", None, "s0->L1"),
        ForwardSpec("S1", "blue", None, "S1->s1"),
    ]
    out_of = {"L1": "L1->L2", "L2": "L2->L3", "L3": "L3->L4", "L4": "L4->s1"}
    forwarding += _chain_forwarding(long_chain, ADVERSARIAL_STREAMS, out_of)
    for sid in ADVERSARIAL_STREAMS:
        forwarding.append(ForwardSpec("s1", sid, None, "s1->s2"))
        forwarding.append(ForwardSpec("s2", sid, None, "s2->listener"))

    cir, cbs, mrt, overrides = _case_tuning(case)
    switch_extra: dict[str, dict] = {name: {} for name in switch_names}

    placement = PLACEMENT_LAST
    grouping = GROUPING_STANDARD
    if case == "a":
        placement = PLACEMENT_NONE
    elif case == "c":
        grouping = GROUPING_PER_STREAM
    elif case == "d":
        placement = PLACEMENT_ALL
    elif case == "i":
        placement = PLACEMENT_NONE
        overrides = [("s2.schedulers", "removed")]

    if placement in (PLACEMENT_LAST, PLACEMENT_ALL):
        scheds, groups = _last_switch_schedulers("s1->s2", grouping, cir, cbs, mrt)
        switch_extra["s2"] = {"schedulers": scheds, "groups": groups}
    if placement == PLACEMENT_ALL:
        per_port = {
            "s0": [("talker_blue->s0", ("blue",)), ("talker_red->s0", ("red",)),
                   ("talker_orange->s0", ("orange",))],
            "S1": [("s0->S1", ("blue",))],
            "L1": [("s0->L1", ADVERSARIAL_STREAMS)],
            "L2": [("L1->L2", ADVERSARIAL_STREAMS)],
            "L3": [("L2->L3", ADVERSARIAL_STREAMS)],
            "L4": [("L3->L4", ADVERSARIAL_STREAMS)],
            "s1": [("S1->s1", ("blue",)), ("L4->s1", ADVERSARIAL_STREAMS)],
        }
        for sw, ports in per_port.items():
            scheds: tuple = ()
            groups: tuple = ()
            for port, sids in ports:
                gname = f"{sw}:{port}"
                groups += (GroupSpec(gname, None),)
                scheds += _scheduler_rows(port, sids, gname)
            switch_extra[sw] = {"schedulers": scheds, "groups": groups}

    nodes = [NodeConfig(d, "device") for d in devices]
    for sw in switch_names:
        extra = switch_extra.get(sw, {})
        kwargs = dict(
            name=sw,
            kind="switch",
            proc_delay=proc,
            schedulers=extra.get("schedulers", ()),
            groups=extra.get("groups", ()),
        )
        if sw == "s0":
            kwargs["splits"] = (SplitSpec("blue", (0, 1)),)
        if sw == "S1":
            kwargs["loss_filters"] = (FilterSpec("s0->S1", "blue", True),)
        if sw == "s1":
            kwargs["recovery"] = ("blue",)
        nodes.append(NodeConfig(**kwargs))

    expect_unbounded = case in ("b", "d")
    assertions = AssertionSpec(
        order=OrderAssertion("s2", ORDER_ADVERSARIAL) if case == "b" else None,
        verdicts=VERDICTS_UNBOUNDED if expect_unbounded else VERDICTS_BOUNDED,
    )
    return ScenarioConfig(
        name="netA",
        case=case,
        nodes=tuple(nodes),
        links=tuple(links),
        streams=streams,
        forwarding=tuple(forwarding),
        duration=rat(10),
        seed=1,
        ats_placement=placement,
        grouping_mode=grouping,
        parameter_overrides=tuple(overrides),
        assertions=assertions,
    )


def _build_netBC(name: str, case: str) -> ScenarioConfig:
    """netB and netC share their arithmetic; only switch naming differs.

    Short path: shared source device -> head switch -> short switch -> join.
    Long path: red+orange (netC: one shared device; netB: two devices)
    through the transit chain to the join switch, then the shaped final
    switch.  Green leaves at the short switch.
    """
    proc = us(5)
    if name == "netB":
        short_head, short_sw = "s0", "S1"
        chain = ["L1", "L2", "L3", "L4"]
        ro_sources = {"red": "talker_red", "orange": "talker_orange"}
        chain_entry = [("talker_red->s0", "s0"), ("talker_orange->s0", "s0")]
    else:
        short_head, short_sw = "S0", "S1"
        chain = ["L0", "L1", "L2", "L3", "L4"]
        ro_sources = {"red": "talker_ro", "orange": "talker_ro"}
        chain_entry = [("talker_ro->L0", "L0")]

    blue, red, orange = _adversarial(
        us(5),
        sources={"blue": "talker_bg", **ro_sources},
        frer={},
    )
    green = StreamSpec(
        stream_id="green",
        frame_size_bits=GREEN_FRAME_BITS,
        priority=blue.priority,
        period=us(140),
        offsets=(ZERO,),
        jitter_bound=ZERO,
        source="talker_bg",
        destination="green_listener",
    )
    streams = (blue, red, orange, green)

    devices = ["talker_bg", *sorted(set(ro_sources.values())), "green_listener",
               "listener"]
    switch_names = [short_head, short_sw] + [c for c in chain if c != short_head] \
        + ["s1", "s2"]
    # netB routes red/orange through s0 as well; netC gives the long path its
    # own head switch, so the chain list already covers it
    links = [
        LinkSpec(f"talker_bg->{short_head}", "talker_bg", short_head, SYN_LINK_RATE),
        LinkSpec(f"{short_head}->{short_sw}", short_head, short_sw, SYN_LINK_RATE),
        LinkSpec(f"{short_sw}->green_listener", short_sw, "green_listener",
                 SYN_LINK_RATE),
        LinkSpec(f"{short_sw}->s1", short_sw, "s1", SYN_LINK_RATE),
        LinkSpec("s1->s2", "s1", "s2", SYN_LINK_RATE),
        LinkSpec("s2->listener", "s2", "listener", SYN_LINK_RATE),
    ]
    for dev_link, head in chain_entry:
        links.append(LinkSpec(dev_link, dev_link.split("->")[0], head, SYN_LINK_RATE))
    chain_pairs = list(zip(chain, chain[1:] + ["s1"]))
    if name == "netB":
        links.append(LinkSpec("s0->L1", "s0", "L1", SYN_LINK_RATE))
    for a, b in chain_pairs:
        links.append(LinkSpec(f"{a}->{b}", a, b, SYN_LINK_RATE))

    forwarding = [
        ForwardSpec(short_head, "blue", None, f"{short_head}->{short_sw}"),
        ForwardSpec(short_head, "green", None, f"{short_head}->{short_sw}"),
        ForwardSpec(short_sw, "blue", None, f"{short_sw}->s1"),
        ForwardSpec(short_sw, "green", None, f"{short_sw}->green_listener"),
    ]
    out_of = {a: f"{a}->{b}" for a, b in chain_pairs}
    if name == "netB":
        forwarding.append(ForwardSpec("s0", "red", None, "s0->L1"))
        forwarding.append(ForwardSpec("s0", "orange", None, "s0->L1"))
    forwarding += _chain_forwarding(chain, ("red", "orange"), out_of)
    for sid in ADVERSARIAL_STREAMS:
        forwarding.append(ForwardSpec("s1", sid, None, "s1->s2"))
        forwarding.append(ForwardSpec("s2", sid, None, "s2->listener"))

    if case == "i":
        raise ValidationError(
            f"case (i) removes shaping after a merge; {name} has no merge"
        )
    if case in ("d", "f", "g", "h", "j"):
        raise ValidationError(f"case ({case}) is defined on netA only")

    cir, cbs, mrt, overrides = _case_tuning(case)
    placement = PLACEMENT_LAST
    grouping = GROUPING_STANDARD
    if case == "a":
        placement = PLACEMENT_NONE
    elif case == "c":
        grouping = GROUPING_PER_STREAM
    elif case == "e":
        placement = PLACEMENT_ALL

    switch_extra: dict[str, dict] = {}
    if placement in (PLACEMENT_LAST, PLACEMENT_ALL):
        scheds, groups = _last_switch_schedulers("s1->s2", grouping, cir, cbs, mrt)
        switch_extra["s2"] = {"schedulers": scheds, "groups": groups}
    if placement == PLACEMENT_ALL:
        per_port: dict[str, list] = {
            short_head: [(f"talker_bg->{short_head}", ("blue",))],
            short_sw: [(f"{short_head}->{short_sw}", ("blue",))],
            "s1": [(f"{short_sw}->s1", ("blue",)),
                   (f"{chain[-1]}->s1", ("red", "orange"))],
        }
        if name == "netB":
            per_port["s0"].append(("talker_red->s0", ("red",)))
            per_port["s0"].append(("talker_orange->s0", ("orange",)))
            per_port["L1"] = [("s0->L1", ("red", "orange"))]
        else:
            per_port["L0"] = [("talker_ro->L0", ("red", "orange"))]
        for a, b in chain_pairs[:-1]:
            per_port[b] = [(f"{a}->{b}", ("red", "orange"))]
        for sw, ports in per_port.items():
            scheds: tuple = ()
            groups: tuple = ()
            for port, sids in ports:
                gname = f"{sw}:{port}"
                groups += (GroupSpec(gname, None),)
                scheds += _scheduler_rows(port, sids, gname)
            switch_extra[sw] = {"schedulers": scheds, "groups": groups}

    nodes = [NodeConfig(d, "device") for d in devices]
    for sw in switch_names:
        extra = switch_extra.get(sw, {})
        nodes.append(
            NodeConfig(
                name=sw,
                kind="switch",
                proc_delay=proc,
                schedulers=extra.get("schedulers", ()),
                groups=extra.get("groups", ()),
            )
        )

    expect_unbounded = case == "b"
    if case == "e":
        order = OrderAssertion("s2", ORDER_PRODUCTION)
    elif case == "b":
        order = OrderAssertion("s2", ORDER_ADVERSARIAL)
    else:
        order = None
    assertions = AssertionSpec(
        order=order,
        verdicts=VERDICTS_UNBOUNDED if expect_unbounded else VERDICTS_BOUNDED,
    )
    return ScenarioConfig(
        name=name,
        case=case,
        nodes=tuple(nodes),
        links=tuple(links),
        streams=streams,
        forwarding=tuple(forwarding),
        duration=rat(10),
        seed=1,
        ats_placement=placement,
        grouping_mode=grouping,
        parameter_overrides=tuple(overrides),
        assertions=assertions,
    )


# ---------------------------------------------------------------------------
# ivn ring

IVN_RATE = 10**9
VIDEO_BITS = 12000
VIDEO_PERIOD_US = rat(750, 11)
VIDEO_CIR = 200 * 10**6
LIDAR_BITS = 12000
LIDAR_PERIOD_US = rat(1500, 13)
LIDAR_CIR = 104 * 10**6
SHAPED_PRIORITY = 4
CROSS_HI_PRIORITY = 5
CROSS_LO_PRIORITY = 2

RING = ("FL", "FR", "RR", "RL")

IVN_SHAPED = ("video1", "video2", "lidar1", "lidar2", "lidar3", "lidar4")

# member paths around the ring, as switch sequences ending at RR
IVN_PATHS = {
    "video1": (("FR", "RR"), ("FR", "FL", "RL", "RR")),
    "video2": (("RL", "RR"), ("RL", "FL", "FR", "RR")),
    "lidar1": (("FL", "FR", "RR"), ("FL", "RL", "RR")),
    "lidar2": (("FR", "RR"), ("FR", "FL", "RL", "RR")),
    "lidar3": (("RL", "RR"), ("RL", "FL", "FR", "RR")),
    "lidar4": (("RR",),),
}

IVN_SOURCES = {
    "video1": "cam_fr",
    "video2": "cam_rl",
    "lidar1": "lidar_fl",
    "lidar2": "lidar_fr",
    "lidar3": "lidar_rl",
    "lidar4": "lidar_rr",
}

# Start times stagger the first frames so each one crosses an idle
# network: the run minimum then equals the clean-path latency in every
# configuration.  Lidar emissions are strict, so their first frames are
# conflict-free by construction; the jittered video sources get a wide
# berth afterwards.  Cross traffic and the TDMA slot start later still.
IVN_STARTS = {
    "lidar1": ZERO,
    "lidar3": us(30),
    "lidar2": us(70),
    "lidar4": us(110),
    "video1": us(180),
    "video2": us(240),
}

# unshaped cross traffic: (stream, source switch, path, priority)
IVN_CROSS = (
    ("cross_hi1", ("FL", "FR", "RR"), CROSS_HI_PRIORITY),
    ("cross_hi2", ("RL", "FL", "FR"), CROSS_HI_PRIORITY),
    ("cross_lo1", ("FR", "RR", "RL"), CROSS_LO_PRIORITY),
    ("cross_lo2", ("RR", "RL", "FL"), CROSS_LO_PRIORITY),
)


def _ivn_stream(stream_id: str) -> StreamSpec:
    if stream_id.startswith("video"):
        return StreamSpec(
            stream_id=stream_id,
            frame_size_bits=VIDEO_BITS,
            priority=SHAPED_PRIORITY,
            period=VIDEO_PERIOD_US * US,
            offsets=(ZERO,),
            jitter_bound=us(70),
            source=IVN_SOURCES[stream_id],
            destination="adas",
            frer_enabled=True,
            start=IVN_STARTS[stream_id],
        )
    return StreamSpec(
        stream_id=stream_id,
        frame_size_bits=LIDAR_BITS,
        priority=SHAPED_PRIORITY,
        period=LIDAR_PERIOD_US * US,
        offsets=(ZERO,),
        jitter_bound=ZERO,
        source=IVN_SOURCES[stream_id],
        destination="adas",
        frer_enabled=True,
        start=IVN_STARTS[stream_id],
    )


def _ivn_cir(stream_id: str) -> int:
    return VIDEO_CIR if stream_id.startswith("video") else LIDAR_CIR


def _ivn_bits(stream_id: str) -> int:
    return VIDEO_BITS if stream_id.startswith("video") else LIDAR_BITS


def build_ivn(case: str) -> ScenarioConfig:
    if case not in IVN_CASES:
        raise ValidationError(f"unknown ivn case {case!r}; one of {IVN_CASES}")
    switch_mrt = None if case == "baseline" else us(50)

    links = []
    ring_pairs = []
    for i, sw in enumerate(RING):
        nxt = RING[(i + 1) % len(RING)]
        ring_pairs.append((sw, nxt))
        ring_pairs.append((nxt, sw))
    for a, b in ring_pairs:
        links.append(LinkSpec(f"{a}->{b}", a, b, IVN_RATE))

    devices = ["adas", "tdma_src"]
    streams = [_ivn_stream(sid) for sid in IVN_SHAPED]
    for sid in IVN_SHAPED:
        dev = IVN_SOURCES[sid]
        devices.append(dev)
        first = IVN_PATHS[sid][0][0]
        links.append(LinkSpec(f"{dev}->{first}", dev, first, IVN_RATE))
    links.append(LinkSpec("RR->adas", "RR", "adas", IVN_RATE))
    links.append(LinkSpec("tdma_src->FL", "tdma_src", "FL", IVN_RATE))

    for sid, path, prio in IVN_CROSS:
        src_dev, dst_dev = f"src_{sid}", f"dst_{sid}"
        devices += [src_dev, dst_dev]
        links.append(LinkSpec(f"{src_dev}->{path[0]}", src_dev, path[0], IVN_RATE))
        links.append(LinkSpec(f"{path[-1]}->{dst_dev}", path[-1], dst_dev, IVN_RATE))
        streams.append(
            StreamSpec(
                stream_id=sid,
                frame_size_bits=4000,
                priority=prio,
                period=us(500),
                offsets=(us(400), us(450)),
                jitter_bound=ZERO,
                source=src_dev,
                destination=dst_dev,
            )
        )
    streams.append(
        StreamSpec(
            stream_id="tdma",
            frame_size_bits=12000,  # one 12 us slot at line rate
            priority=7,
            period=us(500),
            offsets=(us(400),),
            jitter_bound=ZERO,
            source="tdma_src",
            destination="adas",
        )
    )

    forwarding = []
    ingress: dict[str, dict] = {sw: {} for sw in RING}  # switch -> port -> set

    def note(sw, port, sid):
        ingress[sw].setdefault(port, set()).add(sid)

    for sid in IVN_SHAPED:
        paths = IVN_PATHS[sid]
        dev_port = f"{IVN_SOURCES[sid]}->{paths[0][0]}"
        if len(paths) == 1:
            note(paths[0][0], dev_port, sid)
            forwarding.append(ForwardSpec("RR", sid, None, "RR->adas"))
            continue
        note(paths[0][0], dev_port, sid)
        for member, path in enumerate(paths):
            for here, nxt in zip(path, path[1:]):
                forwarding.append(ForwardSpec(here, sid, member, f"{here}->{nxt}"))
                note(nxt, f"{here}->{nxt}", sid)
        forwarding.append(ForwardSpec("RR", sid, None, "RR->adas"))

    for sid, path, _ in IVN_CROSS:
        for here, nxt in zip(path, path[1:]):
            forwarding.append(ForwardSpec(here, sid, None, f"{here}->{nxt}"))
        forwarding.append(ForwardSpec(path[-1], sid, None, f"{path[-1]}->dst_{sid}"))
    for here, nxt in (("FL", "FR"), ("FR", "RR")):
        forwarding.append(ForwardSpec(here, "tdma", None, f"{here}->{nxt}"))
    forwarding.append(ForwardSpec("RR", "tdma", None, "RR->adas"))

    post_cbs = {sid: LIDAR_BITS for sid in IVN_SHAPED}
    if case == "s2":
        for sid in IVN_SHAPED:
            if sid.startswith("lidar"):
                post_cbs[sid] = 2 * LIDAR_BITS

    nodes = []
    for sw in RING:
        scheds: tuple = ()
        groups: tuple = ()
        for port, sids in sorted(ingress[sw].items()):
            gname = f"{sw}:{port}"
            groups += (GroupSpec(gname, switch_mrt),)
            scheds += tuple(
                SchedulerSpec(port, sid, Rat(_ivn_cir(sid)), _ivn_bits(sid), gname)
                for sid in sorted(sids)
            )
        kwargs = dict(name=sw, kind="switch", proc_delay=us(1))
        if sw == "RR":
            kwargs["recovery"] = IVN_SHAPED
            if case in ("baseline", "s2"):
                groups += (GroupSpec("RR:post", switch_mrt),)
                scheds += tuple(
                    SchedulerSpec(
                        POST_RECOVERY_PORT, sid, Rat(_ivn_cir(sid)),
                        post_cbs[sid], "RR:post"
                    )
                    for sid in IVN_SHAPED
                )
                kwargs["allow_post_recovery_shaping"] = True
        kwargs["schedulers"] = scheds
        kwargs["groups"] = groups
        split_here = tuple(
            SplitSpec(sid, tuple(range(len(IVN_PATHS[sid]))))
            for sid in IVN_SHAPED
            if len(IVN_PATHS[sid]) > 1 and IVN_PATHS[sid][0][0] == sw
        )
        kwargs["splits"] = split_here
        nodes.append(NodeConfig(**kwargs))

    for dev in devices:
        if dev in IVN_SOURCES.values():
            sid = next(s for s, d in IVN_SOURCES.items() if d == dev)
            nodes.append(
                NodeConfig(
                    name=dev,
                    kind="device",
                    schedulers=(
                        SchedulerSpec(
                            "source", sid, Rat(_ivn_cir(sid)), _ivn_bits(sid),
                            f"{dev}:source"
                        ),
                    ),
                    groups=(GroupSpec(f"{dev}:source", None),),
                )
            )
        else:
            nodes.append(NodeConfig(name=dev, kind="device"))

    overrides = []
    if case == "s2":
        overrides = [("RR.post.lidar.cbs", str(2 * LIDAR_BITS))]
    expected = "Unbounded" if case == "baseline" else "Bounded"
    assertions = AssertionSpec(
        order=None,
        verdicts=tuple((sid, expected) for sid in IVN_SHAPED),
    )
    return ScenarioConfig(
        name="ivn",
        case=case,
        nodes=tuple(nodes),
        links=tuple(links),
        streams=tuple(streams),
        forwarding=tuple(forwarding),
        duration=rat(1),
        seed=1,
        ats_placement=PLACEMENT_ALL,
        grouping_mode=GROUPING_STANDARD,
        parameter_overrides=tuple(overrides),
        bounded_threshold=1e-4,
        unbounded_threshold=1e-3,
        assertions=assertions,
    )


# ---------------------------------------------------------------------------
# entry points

def build_scenario(name: str, case: str) -> ScenarioConfig:
    if name == "netA":
        if case not in SYNTHETIC_CASES or case == "e":
            raise ValidationError(
                f"netA supports cases {tuple(c for c in SYNTHETIC_CASES if c != 'e')}"
            )
        config = _build_netA(case)
    elif name in ("netB", "netC"):
        config = _build_netBC(name, case)
    elif name == "ivn":
        config = build_ivn(case)
    else:
        raise ValidationError(f"unknown scenario {name!r}")
    validate(config)
    return config


def apply_solution(config: ScenarioConfig, solution: Solution) -> ScenarioConfig:
    """Reconfigure an already-built scenario with one mitigation.

    The base case's expected verdicts describe the base case, not the
    edited configuration (a residence limit of 10 s behaves nothing like
    one of 10 us), so every edit drops them.  Arrival-order assertions
    watch switch ingress, which none of the edits touch; they stay.
    """
    if solution.kind == S1_ATS_ALL_HOPS:
        rebuilt = build_scenario(config.name, "d" if config.name == "netA" else "e")
        return replace(
            rebuilt,
            duration=config.duration,
            seed=config.seed,
        )
    config = replace(
        config,
        assertions=AssertionSpec(order=config.assertions.order, verdicts=()),
    )
    if solution.kind in (S2_INCREASE_CIR, S2_INCREASE_CBS, S2_INCREASE_BOTH):
        factor = solution.value if solution.value is not None else Rat(2)
        downstream = _post_merge_switches(config)
        if not downstream:
            raise ValidationError(
                "increase-cir/cbs applies to schedulers downstream of a recovery "
                "function; this scenario has none"
            )
        nodes = []
        overrides = list(config.parameter_overrides)
        for node in config.nodes:
            if node.name in downstream and node.schedulers:
                scheds = []
                for s in node.schedulers:
                    cir, cbs = s.cir, s.cbs
                    if solution.kind in (S2_INCREASE_CIR, S2_INCREASE_BOTH):
                        cir = cir * factor
                        overrides.append((f"{node.name}.{s.stream_id}.cir", str(cir)))
                    if solution.kind in (S2_INCREASE_CBS, S2_INCREASE_BOTH):
                        cbs = int(cbs * factor)
                        overrides.append((f"{node.name}.{s.stream_id}.cbs", str(cbs)))
                    scheds.append(replace(s, cir=cir, cbs=cbs))
                nodes.append(replace(node, schedulers=tuple(scheds)))
            else:
                nodes.append(node)
        return replace(
            config, nodes=tuple(nodes), parameter_overrides=tuple(overrides)
        )
    if solution.kind == S3_NO_ATS_AFTER_MERGE:
        downstream = _post_merge_switches(config)
        if not any(n.recovery for n in config.nodes):
            raise ValidationError(
                "no-ats-after-merge requires a recovery function in the scenario"
            )
        nodes = []
        for node in config.nodes:
            scheds = node.schedulers
            if node.recovery:
                scheds = tuple(s for s in scheds if s.port != POST_RECOVERY_PORT)
            if node.name in downstream:
                scheds = ()
            nodes.append(
                replace(node, schedulers=scheds, allow_post_recovery_shaping=False)
            )
        return replace(
            config,
            nodes=tuple(nodes),
            parameter_overrides=config.parameter_overrides
            + (("post-merge.schedulers", "removed"),),
        )
    if solution.kind == S4_SET_MRT:
        final = _final_switches(config)
        nodes = []
        for node in config.nodes:
            if node.name in final and node.groups:
                groups = tuple(replace(g, mrt=solution.value) for g in node.groups)
                nodes.append(replace(node, groups=groups))
            else:
                nodes.append(node)
        return replace(
            config,
            nodes=tuple(nodes),
            parameter_overrides=config.parameter_overrides
            + (("final-switch.mrt", ns_string(solution.value) + "ns"),),
        )
    raise ValidationError(f"unhandled solution {solution.kind}")


def _post_merge_switches(config: ScenarioConfig) -> set:
    """Switches strictly downstream of any recovery function."""
    recovery_switches = {n.name for n in config.nodes if n.recovery}
    if not recovery_switches:
        return set()
    downstream = set()
    adj: dict[str, set] = {}
    for link in config.links:
        adj.setdefault(link.src, set()).add(link.dst)
    frontier = set(recovery_switches)
    switch_names = {n.name for n in config.nodes if n.kind == "switch"}
    while frontier:
        nxt = set()
        for sw in frontier:
            for dst in adj.get(sw, ()):
                if dst in switch_names and dst not in downstream:
                    downstream.add(dst)
                    nxt.add(dst)
        frontier = nxt
    # recovery switches count for their own post-recovery schedulers
    return downstream | recovery_switches


def _final_switches(config: ScenarioConfig) -> set:
    """Switches whose out-links reach shaped-stream destinations directly."""
    dests = {s.destination for s in config.streams if _is_shaped_stream(config, s)}
    return {l.src for l in config.links if l.dst in dests}


def _is_shaped_stream(config: ScenarioConfig, spec: StreamSpec) -> bool:
    for node in config.nodes:
        for sched in node.schedulers:
            if sched.stream_id == spec.stream_id:
                return True
    return False


# ---------------------------------------------------------------------------
# serialization

def _rat_str(value: Rat) -> str:
    return str(value)


def _rat_load(text: str | None) -> Rat | None:
    if text is None:
        return None
    return rat(text)


def to_json(config: ScenarioConfig) -> str:
    def stream_d(s: StreamSpec) -> dict:
        return {
            "stream_id": s.stream_id,
            "frame_size_bits": s.frame_size_bits,
            "priority": s.priority,
            "period": _rat_str(s.period),
            "offsets": [_rat_str(o) for o in s.offsets],
            "jitter_bound": _rat_str(s.jitter_bound),
            "source": s.source,
            "destination": s.destination,
            "frer_enabled": s.frer_enabled,
            "start": _rat_str(s.start),
        }

    def node_d(n: NodeConfig) -> dict:
        return {
            "name": n.name,
            "kind": n.kind,
            "proc_delay": _rat_str(n.proc_delay),
            "schedulers": [
                {
                    "port": s.port,
                    "stream_id": s.stream_id,
                    "cir": _rat_str(s.cir),
                    "cbs": s.cbs,
                    "group": s.group,
                }
                for s in n.schedulers
            ],
            "groups": [
                {"name": g.name, "mrt": None if g.mrt is None else _rat_str(g.mrt)}
                for g in n.groups
            ],
            "recovery": list(n.recovery),
            "splits": [
                {"stream_id": sp.stream_id, "members": list(sp.members)}
                for sp in n.splits
            ],
            "loss_filters": [
                {"port": f.port, "stream_id": f.stream_id, "drop_first": f.drop_first}
                for f in n.loss_filters
            ],
            "allow_post_recovery_shaping": n.allow_post_recovery_shaping,
        }

    payload = {
        "schema_version": config.schema_version,
        "name": config.name,
        "case": config.case,
        "nodes": [node_d(n) for n in config.nodes],
        "links": [
            {"name": l.name, "src": l.src, "dst": l.dst, "rate": l.rate}
            for l in config.links
        ],
        "streams": [stream_d(s) for s in config.streams],
        "forwarding": [
            {
                "switch": f.switch,
                "stream_id": f.stream_id,
                "member": f.member,
                "link": f.link,
            }
            for f in config.forwarding
        ],
        "duration": _rat_str(config.duration),
        "seed": config.seed,
        "ats_placement": config.ats_placement,
        "grouping_mode": config.grouping_mode,
        "parameter_overrides": [list(pair) for pair in config.parameter_overrides],
        "bounded_threshold": config.bounded_threshold,
        "unbounded_threshold": config.unbounded_threshold,
        "assertions": {
            "order": None
            if config.assertions.order is None
            else {
                "switch": config.assertions.order.switch,
                "pattern": list(config.assertions.order.pattern),
            },
            "verdicts": [list(pair) for pair in config.assertions.verdicts],
        },
    }
    return json.dumps(payload, indent=2) + "\n"


def from_json(text: str) -> ScenarioConfig:
    d = json.loads(text)
    if d.get("schema_version") != SCHEMA_VERSION:
        raise ValidationError(
            f"unsupported schema_version {d.get('schema_version')!r}"
        )
    streams = tuple(
        StreamSpec(
            stream_id=s["stream_id"],
            frame_size_bits=s["frame_size_bits"],
            priority=s["priority"],
            period=rat(s["period"]),
            offsets=tuple(rat(o) for o in s["offsets"]),
            jitter_bound=rat(s["jitter_bound"]),
            source=s["source"],
            destination=s["destination"],
            frer_enabled=s["frer_enabled"],
            start=rat(s["start"]),
        )
        for s in d["streams"]
    )
    nodes = tuple(
        NodeConfig(
            name=n["name"],
            kind=n["kind"],
            proc_delay=rat(n["proc_delay"]),
            schedulers=tuple(
                SchedulerSpec(
                    port=s["port"],
                    stream_id=s["stream_id"],
                    cir=rat(s["cir"]),
                    cbs=s["cbs"],
                    group=s["group"],
                )
                for s in n["schedulers"]
            ),
            groups=tuple(
                GroupSpec(g["name"], _rat_load(g["mrt"])) for g in n["groups"]
            ),
            recovery=tuple(n["recovery"]),
            splits=tuple(
                SplitSpec(sp["stream_id"], tuple(sp["members"])) for sp in n["splits"]
            ),
            loss_filters=tuple(
                FilterSpec(f["port"], f["stream_id"], f["drop_first"])
                for f in n["loss_filters"]
            ),
            allow_post_recovery_shaping=n["allow_post_recovery_shaping"],
        )
        for n in d["nodes"]
    )
    assertions = AssertionSpec(
        order=None
        if d["assertions"]["order"] is None
        else OrderAssertion(
            d["assertions"]["order"]["switch"],
            tuple(d["assertions"]["order"]["pattern"]),
        ),
        verdicts=tuple(tuple(pair) for pair in d["assertions"]["verdicts"]),
    )
    return ScenarioConfig(
        name=d["name"],
        case=d["case"],
        nodes=nodes,
        links=tuple(
            LinkSpec(l["name"], l["src"], l["dst"], l["rate"]) for l in d["links"]
        ),
        streams=streams,
        forwarding=tuple(
            ForwardSpec(f["switch"], f["stream_id"], f["member"], f["link"])
            for f in d["forwarding"]
        ),
        duration=rat(d["duration"]),
        seed=d["seed"],
        ats_placement=d["ats_placement"],
        grouping_mode=d["grouping_mode"],
        parameter_overrides=tuple(tuple(p) for p in d["parameter_overrides"]),
        bounded_threshold=d["bounded_threshold"],
        unbounded_threshold=d["unbounded_threshold"],
        assertions=assertions,
        schema_version=d["schema_version"],
    )


def bundled_text(name: str, case: str) -> str:
    """Raw JSON of a shipped scenario file (same content as the builder)."""
    from importlib.resources import files

    resource = files("tsnsim").joinpath(f"data/scenarios/{name}-{case}.json")
    try:
        return resource.read_text()
    except FileNotFoundError:
        raise ValidationError(
            f"no bundled scenario {name!r}/{case!r}; known: {CASE_MATRIX}"
        ) from None


def bundled_config(name: str, case: str) -> ScenarioConfig:
    return from_json(bundled_text(name, case))
