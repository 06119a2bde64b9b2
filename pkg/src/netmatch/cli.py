"""Command-line front end.

Exit codes: 0 success or property holds, 1 property fails, 2 bad input,
3 instance too large for an exhaustive check.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import bench, verifiers
from .generators import gen_instance
from .io import dump_instance, read_instance, read_report
from .market import SHAPES, TREE, MarketError, build_market
from .mechanisms import MechanismId, mechanism_id, run

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAPABILITY = 0, 1, 2, 3
PROPERTIES = ("ir", "pe", "sp", "core", "sc4n", "cp")
FAMILIES = {
    "core": verifiers.CoalitionFamily.ALL_SUBSETS,
    "sc4n": verifiers.CoalitionFamily.ADJACENT_PAIRS,
    "cp": verifiers.CoalitionFamily.PATH_SUBSETS,
}
MECHANISM_NAMES = [m.value for m in MechanismId]


def _uint64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes or min(sizes) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return sizes


def _mechanisms(text: str) -> tuple[MechanismId, ...]:
    if text == "all":
        return tuple(MechanismId)
    try:
        return tuple(mechanism_id(m.strip()) for m in text.split(","))
    except MarketError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netmatch", description="Housing markets on invitation networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a mechanism and print the allocation")
    p.add_argument("--mechanism", required=True, choices=MECHANISM_NAMES)
    p.add_argument("--instance", required=True, type=Path)
    p.add_argument("--report", type=Path, help="report overrides (omitted agents are truthful)")
    p.add_argument("--trace", action="store_true", help="also print the per-round trace as JSON")

    p = sub.add_parser("verify", help="check a property of a mechanism on an instance")
    p.add_argument("--property", required=True, choices=PROPERTIES)
    p.add_argument("--mechanism", required=True, choices=MECHANISM_NAMES)
    p.add_argument("--instance", required=True, type=Path)
    p.add_argument("--max-n", type=int, help="override the brute-force size bound")
    p.add_argument(
        "--coalition-houses",
        choices=(verifiers.ENDOWMENTS, verifiers.ASSIGNED),
        default=verifiers.ENDOWMENTS,
        help="what a blocking coalition may redistribute",
    )

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--seed", required=True, type=_uint64)
    p.add_argument("--shape", choices=SHAPES, default=TREE)
    p.add_argument("--extra-edges", type=int, default=0)
    p.add_argument("--out", type=Path, help="output file (default: stdout)")

    p = sub.add_parser("bench", help="run the swap/improvement benchmark")
    p.add_argument("--sizes", type=_sizes, default=bench.DEFAULT_SIZES)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=_uint64, default=0)
    p.add_argument("--mechanisms", type=_mechanisms, default=bench.BenchConfig.mechanisms)
    p.add_argument("--shape", choices=SHAPES, default=TREE)
    p.add_argument("--extra-edges", type=int, default=0)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--plot", type=Path, help="directory for swaps.svg and improvement.svg")
    return parser


def cmd_run(args, out) -> int:
    instance = read_instance(args.instance)
    reports = read_report(args.report, instance) if args.report else None
    allocation, trace = run(args.mechanism, build_market(instance, reports))
    for agent, house in sorted(allocation.assignment.items()):
        print(f"agent {agent} -> house {house}", file=out)
    if args.trace:
        print(json.dumps(trace.to_dict(), sort_keys=True), file=out)
    return EXIT_OK


def _verdict(ok: bool, out, detail: dict | None = None) -> int:
    print("PASS" if ok else "FAIL", file=out)
    if detail:
        print(json.dumps(detail, sort_keys=True), file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args, out) -> int:
    instance = read_instance(args.instance)
    prop, mech = args.property, args.mechanism
    bound = {} if args.max_n is None else {"max_n": args.max_n}
    if prop == "sp":
        ce = verifiers.check_strategy_proof(mech, instance, **bound)
        if ce is None:
            return _verdict(True, out)
        dev = ce.deviation
        return _verdict(False, out, {
            "agent": dev.agent,
            "reported_children": sorted(dev.reported_children),
            "reported_preference": list(dev.reported_preference),
            "truthful_outcome": ce.truthful_outcome,
            "deviating_outcome": ce.deviating_outcome,
        })

    allocation = verifiers.outcome(mech, instance)
    if prop == "ir":
        bad = verifiers.check_ir(instance, allocation)
        return _verdict(not bad, out, {"violators": bad} if bad else None)
    if prop == "pe":
        witness = verifiers.check_pareto_efficient(instance, allocation, **bound)
        return _verdict(witness is None, out, {"dominating": list(witness.houses(instance.n))} if witness else None)
    found = verifiers.find_blocking_coalition(
        instance, allocation, FAMILIES[prop], houses=args.coalition_houses, **bound
    )
    if found is None:
        return _verdict(True, out)
    return _verdict(False, out, {
        "coalition": sorted(found.members),
        "reallocation": {str(a): h for a, h in found.reallocation.items()},
    })


def cmd_gen(args, out) -> int:
    instance = gen_instance(args.n, args.seed, args.shape, args.extra_edges)
    text = dump_instance(instance, f"generated: n={args.n} seed={args.seed} shape={args.shape}")
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    config = bench.BenchConfig(
        sizes=args.sizes,
        trials_per_size=args.trials,
        mechanisms=args.mechanisms,
        master_seed=args.seed,
        shape=args.shape,
        extra_edges=args.extra_edges,
    )
    records = bench.run_benchmark(config)
    bench.write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}", file=out)
    if args.plot:
        args.plot.mkdir(parents=True, exist_ok=True)
        summary = bench.summarize(records)
        for metric in ("swaps", "improvement"):
            path = bench.emit_plot(summary, metric, args.plot / f"{metric}.svg")
            print(f"wrote {path}", file=out)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "verify": cmd_verify, "gen": cmd_gen, "bench": cmd_bench}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except verifiers.CapabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (MarketError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
