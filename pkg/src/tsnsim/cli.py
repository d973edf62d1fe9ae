"""Command-line front end: pick a scenario, run it, export the results.

Exit codes: 0 when every scenario assertion holds, 1 when the run
completed but an assertion failed, 2 for usage errors (unknown scenario
or case, malformed flags).  Each run writes frames.csv and summary.json
(plus trace.log with --trace) into its own directory under --out, so
batch and sweep invocations never contend for a file.
"""

from __future__ import annotations

import argparse
import shlex
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .engine import run
from .metrics import export_csv, write_summary
from .rational import ns_string, parse_time
from .scenarios import (
    S1_ATS_ALL_HOPS,
    S2_INCREASE_BOTH,
    S2_INCREASE_CBS,
    S2_INCREASE_CIR,
    S3_NO_ATS_AFTER_MERGE,
    S4_SET_MRT,
    Solution,
    ValidationError,
    apply_solution,
    build_scenario,
    from_json,
)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_USAGE = 2

SOLUTION_TOKENS = {
    "s1": S1_ATS_ALL_HOPS,
    "s2": S2_INCREASE_BOTH,
    "s2-cir": S2_INCREASE_CIR,
    "s2-cbs": S2_INCREASE_CBS,
    "s2-both": S2_INCREASE_BOTH,
    "s3": S3_NO_ATS_AFTER_MERGE,
}

# The ring scenario's mitigations are shipped as whole configurations
# because they change shaper placement and residence limits together;
# solution flags select one of them rather than composing edits.
IVN_SOLUTION_CASES = {
    frozenset(("s1", "s3")): "s1s3",
    frozenset(("s2",)): "s2",
    frozenset(("s2-cbs",)): "s2",
}


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsnsim",
        description="Deterministic shaping/replication simulator.",
    )
    source = parser.add_mutually_exclusive_group()
    source.add_argument(
        "--scenario", choices=("netA", "netB", "netC", "ivn"),
        help="built-in scenario family",
    )
    source.add_argument(
        "--config", metavar="FILE", help="load a scenario from a JSON file"
    )
    parser.add_argument(
        "--case",
        help="scenario case letter (netA: a-d f-j, netB/netC: a b c e, "
        "ivn: baseline s1s3 s2); defaults to the shaped baseline when "
        "--solution is given",
    )
    parser.add_argument(
        "--solution", action="append", default=[], metavar="KIND",
        help="mitigation to apply, repeatable: s1, s2, s2-cir, s2-cbs, "
        "s2-both, s3, or s4:<residence time, e.g. 1ms>",
    )
    parser.add_argument("--duration", help="simulated time, e.g. 10s, 200ms")
    parser.add_argument("--seed", type=int, help="override the scenario seed")
    parser.add_argument(
        "--out", default="runs", metavar="DIR",
        help="directory for per-run output directories (default: runs)",
    )
    parser.add_argument(
        "--trace", action="store_true",
        help="also write an event trace (large for long runs)",
    )
    parser.add_argument(
        "--sweep", metavar="mrt=V1,V2,...",
        help="run once per residence-time value, e.g. mrt=100us,1ms,10ms",
    )
    parser.add_argument(
        "--batch", metavar="FILE",
        help="file with one run per line, each line holding the flags "
        "above except --out, --batch, --workers",
    )
    parser.add_argument(
        "--workers", type=int, default=1,
        help="parallel workers for --batch and --sweep (default: 1)",
    )
    return parser


def _parse_solutions(tokens) -> list[Solution]:
    solutions = []
    for token in tokens:
        if token in SOLUTION_TOKENS:
            solutions.append(Solution(SOLUTION_TOKENS[token]))
        elif token.startswith("s4:"):
            try:
                solutions.append(Solution(S4_SET_MRT, parse_time(token[3:])))
            except ValueError as exc:
                raise UsageError(f"bad --solution {token!r}: {exc}") from None
        else:
            raise UsageError(
                f"unknown --solution {token!r}; expected one of "
                f"{', '.join(SOLUTION_TOKENS)}, or s4:<time>"
            )
    return solutions


def _label(args) -> str:
    if args.config:
        stem = Path(args.config).stem
    else:
        stem = f"{args.scenario}-{args.case}"
    for token in args.solution:
        stem += "-" + token.replace(":", "_").replace("/", "_")
    return stem


def _jobs_from_args(args) -> list[dict]:
    """Expand parsed flags into one picklable job dict per run."""
    if args.config is None and args.scenario is None:
        raise UsageError("one of --scenario or --config is required")
    if args.config and args.case:
        raise UsageError("--case applies to built-in scenarios, not --config")
    if args.solution and args.sweep:
        raise UsageError("--sweep and --solution cannot be combined")

    solution_tokens = list(args.solution)
    case = args.case
    if args.scenario == "ivn" and solution_tokens:
        chosen = IVN_SOLUTION_CASES.get(frozenset(solution_tokens))
        if chosen is None:
            raise UsageError(
                "ivn mitigations ship as whole configurations: pass "
                "--solution s1 --solution s3 together, or --solution s2"
            )
        case, solution_tokens = chosen, []
    elif args.scenario and case is None:
        case = "baseline" if args.scenario == "ivn" else "b"
        if not solution_tokens and not args.sweep:
            raise UsageError(f"--scenario {args.scenario} needs --case or --solution")
    _parse_solutions(solution_tokens)  # validate tokens before any run

    config_text = None
    if args.config:
        try:
            config_text = Path(args.config).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read --config: {exc}") from None

    base = {
        "scenario": args.scenario,
        "case": case,
        "config_text": config_text,
        "solution_tokens": solution_tokens,
        "mrt": None,
        "duration": args.duration,
        "seed": args.seed,
        "out": args.out,
        "trace": args.trace,
        "label": _label(
            argparse.Namespace(
                config=args.config, scenario=args.scenario, case=case,
                solution=solution_tokens,
            )
        ),
    }
    if not args.sweep:
        return [base]

    key, _, values = args.sweep.partition("=")
    if key != "mrt" or not values:
        raise UsageError("--sweep expects mrt=<time>[,<time>...]")
    jobs = []
    for value in values.split(","):
        try:
            parse_time(value)  # validate now; the worker re-parses
        except ValueError as exc:
            raise UsageError(f"bad --sweep value {value!r}: {exc}") from None
        safe = value.strip().replace("/", "_")
        jobs.append(
            dict(base, mrt=value.strip(), label=f"{base['label']}-mrt_{safe}")
        )
    return jobs


def _jobs_from_batch(path: str, out: str, trace: bool) -> list[dict]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read --batch: {exc}") from None
    line_parser = _parser()
    jobs = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens = shlex.split(line)
        forbidden = {"--out", "--batch", "--workers"} & set(tokens)
        if forbidden:
            raise UsageError(
                f"batch line {lineno}: {sorted(forbidden)} belong on the "
                "main command line"
            )
        try:
            args = line_parser.parse_args(tokens)
        except SystemExit:
            raise UsageError(f"batch line {lineno}: unparseable: {line}") from None
        args.out = out
        args.trace = args.trace or trace
        for job in _jobs_from_args(args):
            jobs.append(dict(job, label=f"{lineno:03d}-{job['label']}"))
    if not jobs:
        raise UsageError("batch file contains no runs")
    return jobs


def _execute_job(job: dict) -> dict:
    """Build, run, and export one scenario; returns printable outcome."""
    if job["config_text"] is not None:
        config = from_json(job["config_text"])
    else:
        config = build_scenario(job["scenario"], job["case"])
    for solution in _parse_solutions(job["solution_tokens"]):
        config = apply_solution(config, solution)
    if job["mrt"] is not None:
        config = apply_solution(
            config, Solution(S4_SET_MRT, parse_time(job["mrt"]))
        )

    duration = None if job["duration"] is None else parse_time(job["duration"])
    result = run(config, duration=duration, seed=job["seed"], trace=job["trace"])

    out_dir = Path(job["out"]) / job["label"]
    out_dir.mkdir(parents=True, exist_ok=True)
    export_csv(result.rows, out_dir / "frames.csv")
    payload = dict(result.summary)
    payload["config"] = {
        "ats_placement": config.ats_placement,
        "grouping_mode": config.grouping_mode,
        "parameter_overrides": [list(kv) for kv in config.parameter_overrides],
        "bounded_threshold": config.bounded_threshold,
        "unbounded_threshold": config.unbounded_threshold,
    }
    write_summary(payload, out_dir / "summary.json")
    if job["trace"] and result.trace is not None:
        with open(out_dir / "trace.log", "w") as fh:
            for fire_time, _, kind, target in result.trace:
                fh.write(f"{ns_string(fire_time)} {kind} {target}\n")

    lines = []
    for sid, entry in result.summary["streams"].items():
        drops = {k: v for k, v in entry["drops"].items() if v}
        if entry["min_latency_ns"] is None:
            latency = "no deliveries"
        else:
            latency = f"min {entry['min_latency_ns']}ns  max {entry['max_latency_ns']}ns"
        lines.append(
            f"  {sid:<10} delivered {entry['delivered']:>9}  {latency}"
            f"  {entry.get('verdict', 'n/a')}"
            + (f"  drops {drops}" if drops else "")
        )
    return {
        "label": job["label"],
        "hold": result.assertions_hold(),
        "failures": result.order_failures + result.verdict_failures,
        "lines": lines,
        "out_dir": str(out_dir),
    }


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        if args.batch:
            single_run_flags = (
                args.scenario, args.config, args.sweep, args.solution or None,
                args.case, args.duration, args.seed,
            )
            if any(flag is not None for flag in single_run_flags):
                raise UsageError("--batch replaces the single-run flags")
            jobs = _jobs_from_batch(args.batch, args.out, args.trace)
        else:
            jobs = _jobs_from_args(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with code 2

    try:
        if args.workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                outcomes = list(pool.map(_execute_job, jobs))
        else:
            outcomes = [_execute_job(job) for job in jobs]
    except ValidationError as exc:
        print(f"tsnsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    all_hold = True
    for outcome in outcomes:
        status = "ok" if outcome["hold"] else "ASSERTIONS FAILED"
        print(f"{outcome['label']}: {status}  -> {outcome['out_dir']}")
        for line in outcome["lines"]:
            print(line)
        for failure in outcome["failures"][:5]:
            print(f"  ! {failure}")
        all_hold = all_hold and outcome["hold"]
    return EXIT_OK if all_hold else EXIT_ASSERTION


if __name__ == "__main__":
    sys.exit(main())
