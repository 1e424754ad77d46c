"""Command-line interface.

Subcommands:
  run <config>...   run scenarios and print a csv/json report to stdout
  ball <group> <radius>   enumerate a word-metric ball as length,element csv
  dist <group> <subgroup> <g1> <g2>   coset distance between two elements
  certify <config>   print certification outcomes for a scenario as json

Exit codes: 0 success; 1 invalid configuration or input; 2 budget exhausted
(always fatal when a ball cannot be built; with --strict, also when any pair
search degraded to UNKNOWN).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .certificates import Certificate
from .core import DEFAULT_NODE_CAP, UNKNOWN, BudgetExceededError, ElementFormatError
from .cosets import SearchBudget, coset_distance_exact, coset_distance_upper
from .report import emit_report
from .scenarios import ConfigError, parse_config, run_scenario_full
from .subgroups import subgroup
from .zoo import get_group


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; that status is reserved
    for budget exhaustion here, so usage errors become ConfigError → 1."""

    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="cosetpack",
        description="Word metrics, coset distances, and packing-number "
                    "experiments on registered groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run scenario config files")
    run_p.add_argument("config", nargs="+", help="path(s) to key=value config files")
    run_p.add_argument("--format", choices=("csv", "json"), default="csv")
    run_p.add_argument("--strict", action="store_true",
                       help="treat budget degradation (UNKNOWN pairs) as fatal")
    run_p.add_argument("--jobs", type=int, default=1,
                       help="run multiple configs in parallel processes")
    run_p.add_argument("--budget-nodes", type=int, default=None,
                       dest="budget_nodes", help="node cap for every search")

    ball_p = sub.add_parser("ball", help="enumerate a ball in the word metric")
    ball_p.add_argument("group")
    ball_p.add_argument("radius", type=int)
    ball_p.add_argument("--budget-nodes", type=int, default=None, dest="budget_nodes")

    dist_p = sub.add_parser("dist", help="distance between two left cosets")
    dist_p.add_argument("group")
    dist_p.add_argument("subgroup")
    dist_p.add_argument("g1")
    dist_p.add_argument("g2")
    dist_p.add_argument("--cutoff", type=int, default=8,
                        help="largest exact distance scanned for")
    dist_p.add_argument("--budget-nodes", type=int, default=None, dest="budget_nodes")

    cert_p = sub.add_parser("certify", help="certification outcomes for a scenario")
    cert_p.add_argument("config")
    cert_p.add_argument("--budget-nodes", type=int, default=None, dest="budget_nodes")
    return parser


def _load_config(path: str):
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    return parse_config(text)


def _jobs_worker(item):
    config, node_cap = item
    result = run_scenario_full(config, node_cap)
    return result.rows, result.degraded


def _cmd_run(args) -> int:
    configs = [_load_config(path) for path in args.config]
    cap = args.budget_nodes
    rows = []
    degraded = False
    if args.jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            # map() yields in submission order: the merged report is identical
            # to a serial run regardless of completion order
            for part, part_degraded in pool.map(
                    _jobs_worker, [(c, cap) for c in configs]):
                rows.extend(part)
                degraded = degraded or part_degraded
    else:
        for config in configs:
            result = run_scenario_full(config, cap)
            rows.extend(result.rows)
            degraded = degraded or result.degraded
    sys.stdout.buffer.write(emit_report(rows, args.format))
    sys.stdout.buffer.flush()
    if degraded and args.strict:
        print("budget exhausted: some pair searches returned UNKNOWN",
              file=sys.stderr)
        return 2
    return 0


def _cmd_ball(args) -> int:
    group = get_group(args.group)
    if args.radius < 0:
        raise ConfigError("radius must be non-negative")
    cap = args.budget_nodes if args.budget_nodes is not None else DEFAULT_NODE_CAP
    ball = group.ball(args.radius, cap)
    lines = sorted(
        ((ball.length(g), group.format_element(g)) for g in ball),
        key=lambda pair: (pair[0], pair[1]),
    )
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(("length", "element"))
    writer.writerows(lines)
    return 0


def _cmd_dist(args) -> int:
    group = get_group(args.group)
    H = subgroup(group, args.subgroup)
    g1 = group.parse_element(args.g1)
    g2 = group.parse_element(args.g2)
    cap = args.budget_nodes if args.budget_nodes is not None else DEFAULT_NODE_CAP

    try:
        exact = coset_distance_exact(group, H, g1, g2,
                                     cutoff=args.cutoff, node_cap=cap)
    except ValueError:
        exact = None  # subgroup lacks an exact double-coset decision
    if exact is UNKNOWN:
        print(f"exact_distance=unknown (beyond cutoff {args.cutoff})")
    elif exact is None:
        print("exact_distance=unavailable")
    else:
        print(f"exact_distance={exact}")

    res = coset_distance_upper(group, H, g1, g2, SearchBudget(node_cap=cap))
    if res is UNKNOWN:
        print("upper_bound=unknown")
    else:
        bound, witness = res
        print(f"upper_bound={bound}")
        print(f"witness_h1={group.format_element(witness.h1)}")
        print(f"witness_h2={group.format_element(witness.h2)}")
        print(f"witness_value={group.format_element(witness.value)}")
        print(f"witness_length={witness.length}")
    return 0


def _cmd_certify(args) -> int:
    config = _load_config(args.config)
    result = run_scenario_full(config, args.budget_nodes)
    payload = []
    for label, outcome in result.certifications:
        if isinstance(outcome, Certificate):
            group = outcome.group
            entry = {
                "label": label,
                "certificate": outcome.to_json_dict(),
                "attempts": [{
                    "description": outcome.quotient.description,
                    "separated": True,
                    "failing_element": None,
                }],
            }
        else:
            group = outcome.subgroup.group
            cert = outcome.certificate
            entry = {
                "label": label,
                "certificate": cert.to_json_dict() if cert else None,
                "attempts": [{
                    "description": attempt.description,
                    "separated": attempt.separated,
                    "failing_element": (
                        group.format_element(attempt.failing_element)
                        if attempt.failing_element is not None else None
                    ),
                } for attempt in outcome.attempts],
            }
        payload.append(entry)
    print(json.dumps(payload, indent=2))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "ball":
            return _cmd_ball(args)
        if args.command == "dist":
            return _cmd_dist(args)
        if args.command == "certify":
            return _cmd_certify(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, ElementFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyError as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return 1
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
