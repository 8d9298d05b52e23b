"""Command line: solve an instance, verify an allocation, generate
instances, and exhaustively search allocation space for a property.

Exit codes: 0 success or property holds, 1 a requested property is
violated (for search: no satisfying allocation), 2 input error, 3
internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from fairdiv import verify
from fairdiv.core import EnumerationCapExceeded, InvariantViolation
from fairdiv.rounding import ExplorationStrategy, allocate
from fairdiv.serialize import (
    format_rational,
    parse_allocation,
    parse_instance,
    print_allocation,
    print_fractional,
    report_doc,
)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3

SEARCHABLE = {
    "prop": verify.weighted_prop,
    "prop1": verify.weighted_prop1,
    "propx": verify.propx,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        _error(str(exc))
        return EXIT_INTERNAL_ERROR
    except EnumerationCapExceeded as exc:
        _error(str(exc))
        return EXIT_INPUT_ERROR
    except (ValueError, OSError) as exc:
        _error(str(exc))
        return EXIT_INPUT_ERROR


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairdiv",
        description="Fair division of mixed goods and chores under entitlements.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser(
        "solve", help="allocate an instance; prints allocation and certificates")
    solve.add_argument("instance", help="instance JSON file")
    solve.add_argument("--strategy-order", choices=["bfs", "dfs"], default="bfs",
                       help="queue discipline of the rounding walk")
    solve.add_argument("--root-rule", choices=["one-item", "lowest-index"],
                       default="one-item", help="how each sharing tree is rooted")
    solve.set_defaults(func=_cmd_solve)

    ver = sub.add_parser("verify", help="check properties of an allocation")
    ver.add_argument("instance", help="instance JSON file")
    ver.add_argument("allocation", help="allocation JSON file")
    ver.add_argument("--property", default="prop1",
                     help="comma-separated subset of prop,prop1,propx,po,fpo,dominates")
    ver.add_argument("--against",
                     help="allocation file the first one should dominate")
    ver.add_argument("--cap", type=int, default=verify.DEFAULT_ENUMERATION_CAP,
                     help="enumeration budget for the po check")
    ver.set_defaults(func=_cmd_verify)

    gen = sub.add_parser("gen", help="generate a pseudo-random instance")
    gen.add_argument("--agents", type=int, required=True)
    gen.add_argument("--items", type=int, required=True)
    gen.add_argument("--lo", type=int, default=-5, help="lowest utility value")
    gen.add_argument("--hi", type=int, default=5, help="highest utility value")
    gen.add_argument("--weight-mode", choices=["equal", "random-positive-normalized"],
                     default="equal")
    gen.add_argument("--seed", type=int, default=0)
    gen.set_defaults(func=_cmd_gen)

    search = sub.add_parser(
        "search", help="count integral allocations satisfying a property")
    search.add_argument("instance", help="instance JSON file")
    search.add_argument("--property", choices=sorted(SEARCHABLE), required=True)
    search.add_argument("--cap", type=int, default=verify.DEFAULT_ENUMERATION_CAP,
                        help="refuse to enumerate more allocations than this")
    search.set_defaults(func=_cmd_search)
    return parser


def _cmd_solve(args) -> int:
    instance, agent_ids, item_ids = parse_instance(_load(args.instance))
    strategy = ExplorationStrategy(order=args.strategy_order, root_rule=args.root_rule)
    result = allocate(instance, strategy)
    certificates = {
        "prop1": report_doc(result.report.prop1, agent_ids, item_ids)["witnesses"],
        "fpoCertified": result.report.fpo_certified,
    }
    if result.report.welfare_weights is not None:
        certificates["welfareWeights"] = [
            format_rational(w) for w in result.report.welfare_weights]
    _emit({
        "allocation": print_allocation(result.integral, agent_ids, item_ids)["owner"],
        "fractionalIntermediate": print_fractional(result.fractional, agent_ids, item_ids),
        "certificates": certificates,
    })
    return EXIT_OK


def _cmd_verify(args) -> int:
    instance, agent_ids, item_ids = parse_instance(_load(args.instance))
    allocation = parse_allocation(_load(args.allocation), agent_ids, item_ids)
    names = [p.strip() for p in args.property.split(",") if p.strip()]
    if not names:
        raise ValueError("no properties requested")
    results = {}
    for name in names:
        if name not in results:
            results[name] = _check_property(name, args, instance, allocation,
                                            agent_ids, item_ids)
    all_hold = all(r["holds"] for r in results.values())
    _emit({"properties": results, "allHold": all_hold})
    return EXIT_OK if all_hold else EXIT_VIOLATED


def _check_property(name, args, instance, allocation, agent_ids, item_ids) -> dict:
    if name in SEARCHABLE:
        return report_doc(SEARCHABLE[name](instance, allocation), agent_ids, item_ids)
    if name == "po":
        holds = verify.is_pareto_optimal_integral(instance, allocation, cap=args.cap)
        return {"holds": holds}
    if name == "fpo":
        return {"holds": not verify.pareto_improvement_exists(instance, allocation)}
    if name == "dominates":
        if not args.against:
            raise ValueError("the dominates check needs --against ALLOCATION_FILE")
        other = parse_allocation(_load(args.against), agent_ids, item_ids)
        return {"holds": verify.pareto_dominates(instance, allocation, other)}
    raise ValueError(f"unknown property {name!r}")


def _cmd_gen(args) -> int:
    if args.agents < 1:
        raise ValueError("need at least one agent")
    if args.items < 0:
        raise ValueError("item count must be nonnegative")
    if args.lo > args.hi:
        raise ValueError("empty utility range")
    rng = random.Random(args.seed)
    if args.weight_mode == "equal":
        weights = [Fraction(1, args.agents)] * args.agents
    else:
        raw = [rng.randint(1, 9) for _ in range(args.agents)]
        weights = [Fraction(r, sum(raw)) for r in raw]
    _emit({
        "agents": [{"id": f"a{i + 1}", "weight": format_rational(w)}
                   for i, w in enumerate(weights)],
        "items": [f"o{j + 1}" for j in range(args.items)],
        "utilities": [[str(rng.randint(args.lo, args.hi)) for _ in range(args.items)]
                      for _ in range(args.agents)],
    })
    return EXIT_OK


def _cmd_search(args) -> int:
    instance, agent_ids, item_ids = parse_instance(_load(args.instance))
    checker = SEARCHABLE[args.property]
    count = 0
    witness = None
    for candidate in verify.enumerate_integral_allocations(instance, cap=args.cap):
        if checker(instance, candidate).holds:
            count += 1
            if witness is None:
                witness = print_allocation(candidate, agent_ids, item_ids)["owner"]
    _emit({
        "property": args.property,
        "searched": verify.enumeration_size(instance),
        "count": count,
        "witness": witness,
    })
    return EXIT_OK if count else EXIT_VIOLATED


def _load(path):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path} is not valid JSON: {exc}") from None


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2))


def _error(message: str) -> None:
    print(json.dumps({"error": message}), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
