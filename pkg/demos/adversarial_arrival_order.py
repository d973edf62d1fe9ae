#!/usr/bin/env python3
"""Two runs of the same two-switch network, one line of config apart.

Case a interleaves the three talkers so frames reach the merge switch in
a friendly order; case b nudges the offsets so every period delivers the
worst possible order to the shared shaper group on the final egress.
Case a settles into a constant latency.  Case b grows without limit:
each period the group's eligibility clock slips a little further behind
the arrivals, and the backlog never drains.

Run with --duration to watch the gap widen for longer.
"""

import argparse
from collections import defaultdict

from tsnsim.engine import run
from tsnsim.rational import parse_time
from tsnsim.scenarios import build_scenario


def windowed_max(result, stream_id, duration, windows=6):
    """Max latency (us) per equal slice of production time."""
    maxima = [None] * windows
    for sid, seq, produced, delivered, cause in result.rows:
        if sid != stream_id or delivered is None:
            continue
        idx = min(int(produced / duration * windows), windows - 1)
        latency = delivered - produced
        if maxima[idx] is None or latency > maxima[idx]:
            maxima[idx] = latency
    return [None if m is None else float(m) * 1e6 for m in maxima]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--duration", default="2s", help="simulated time (default 2s)")
    args = parser.parse_args()
    duration = parse_time(args.duration)

    results = {}
    for case in ("a", "b"):
        results[case] = run(build_scenario("netA", case), duration=duration)

    print(f"netA, {args.duration} simulated, max latency of stream 'blue' per")
    print("sixth of the run (microseconds):\n")
    print(f"{'window':>8}  {'case a (friendly)':>18}  {'case b (adversarial)':>20}")
    rows = zip(
        windowed_max(results["a"], "blue", duration),
        windowed_max(results["b"], "blue", duration),
    )
    for i, (friendly, adversarial) in enumerate(rows, start=1):
        print(f"{i:>8}  {friendly:>18.1f}  {adversarial:>20.1f}")

    print("\nverdicts (latency slope over the second half):")
    for case, result in results.items():
        for sid in ("blue", "red", "orange"):
            v = result.verdicts[sid]
            print(
                f"  case {case}  {sid:<7} {v.verdict:<10}"
                f" slope {v.slope * 1e6:8.1f} us/s"
            )

    by_case = defaultdict(list)
    for case, result in results.items():
        for sid in ("blue", "red", "orange"):
            by_case[case].append(float(result.verdicts[sid].max_latency) * 1e6)
    print(
        f"\nworst latency overall: case a {max(by_case['a']):.0f} us,"
        f" case b {max(by_case['b']):.0f} us and still climbing."
    )


if __name__ == "__main__":
    main()
