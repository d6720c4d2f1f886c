"""
Command line entry point.

    ctrc [-v|-vv] [--config PATH] <subcommand> ...

Exit codes: 0 success or PASS, 1 invalid input or FAIL, 2 usage error,
3 when a search ran out of budget.
"""

from __future__ import annotations

import argparse
import sys

from loguru import logger

from ctrc.bounds import bound
from ctrc.cctrs import CCTRS, PlainSearch, SearchBudget, load_system
from ctrc.csrewrite import CsRewriter
from ctrc.errors import BudgetExceeded, CtrcError, InvalidSystem, ParseError
from ctrc.interpretations import build, check, derive_usable_map, load_interpretation
from ctrc.labeled import CostKind, LabeledRewriter, label
from ctrc.terms import App, Term, parse_term, positions, render
from ctrc.transform import anti_patterns, to_tpdb, transform, zeta, zeta_inv
from ctrc.utils import DEFAULT_CONFIG_PATH, configure_logging, load_config, raise_recursion_limit

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _general(text: str) -> tuple[int, int]:
    try:
        k, m = (int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected K,M but got {text!r}") from None
    return k, m


def _positive(text: str) -> int:
    if not text.isdigit() or int(text) == 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer but got {text!r}")
    return int(text)


def _search_flags(parser: argparse.ArgumentParser, **defaults) -> None:
    parser.add_argument("--config", help="yaml file with default budgets", **defaults)
    parser.add_argument("--budget-states", type=_positive, help="maximum number of states per search", **defaults)
    parser.add_argument("--budget-depth", type=_positive, help="maximum condition nesting depth", **defaults)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctrc", description="Complexity of conditional constructor rewrite systems")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for search detail")
    _search_flags(parser)
    # accepted after the subcommand too; unset flags keep the top-level value
    common = argparse.ArgumentParser(add_help=False)
    _search_flags(common, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the CCTRS restrictions")
    p.add_argument("system")
    p.add_argument("--strong", action="store_true")

    p = sub.add_parser("reduce", parents=[common], help="list one-step reductions of a term")
    p.add_argument("system")
    p.add_argument("--term", required=True)
    p.add_argument("--relation", choices=["labeled", "plain", "quasi", "labeled-quasi"], default="labeled")

    p = sub.add_parser("dh", parents=[common], help="derivation height of a term")
    p.add_argument("system")
    p.add_argument("--term", required=True)
    p.add_argument("--transformed", action="store_true", help="measure the transformed term in the transformed system")

    p = sub.add_parser("complexity", parents=[common], help="conditional runtime or derivational complexity")
    p.add_argument("system")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["crc", "cdc"], default="crc")

    p = sub.add_parser("transform", parents=[common], help="write the unconditional context-sensitive system")
    p.add_argument("system")
    p.add_argument("-o", "--output")
    p.add_argument("--ap", choices=["full", "var"], default="full")
    p.add_argument("--strategy", choices=["cs", "plain"], default="cs")
    p.add_argument("--usable", action="store_true", help="restrict the map on original symbols to the usable map")

    p = sub.add_parser("ap", parents=[common], help="anti-patterns of a linear constructor term")
    p.add_argument("system")
    p.add_argument("--term", required=True)

    p = sub.add_parser("zeta", parents=[common], help="translate between labeled and transformed terms")
    p.add_argument("system")
    p.add_argument("--term", required=True)
    p.add_argument("--inverse", action="store_true")

    p = sub.add_parser("check-interp", parents=[common], help="check an interpretation against the transformed system")
    p.add_argument("system")
    p.add_argument("interp")
    p.add_argument("--grid", type=_positive)
    p.add_argument("--recipe", choices=["A", "B", "C", "direct"])
    p.add_argument("--show", action="store_true", help="print the expanded function of every symbol")

    p = sub.add_parser("urm", parents=[common], help="least usable replacement map")
    p.add_argument("system")

    p = sub.add_parser("bound", parents=[common], help="complexity bound from a checked interpretation")
    p.add_argument("system")
    p.add_argument("interp")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["crc", "cdc"], default="crc")
    p.add_argument("--estimate", choices=["size", "exact"], default="size")
    p.add_argument("--general", type=_general, metavar="K,M")
    p.add_argument("--recipe", choices=["A", "B", "C", "direct"])
    p.add_argument("--grid", type=_positive)
    p.add_argument("--force", action="store_true", help="skip the compatibility check")
    return parser


def read_term(text: str, system: CCTRS) -> Term:
    term = parse_term(text, system.variables)
    system.check_term(term)
    for _, sub in positions(term):
        if isinstance(sub, App) and sub.label is not None:
            if not system.is_defined(sub.name):
                raise ParseError(f"Only defined symbols carry labels, not {sub.name}")
            if not sub.label <= set(range(1, system.m(sub.name) + 1)):
                raise ParseError(f"{sub.name} has rules 1..{system.m(sub.name)}, label {sorted(sub.label)} is out of range")
    return term


def _cost_exit(cost) -> int:
    return EXIT_BUDGET if cost.kind == CostKind.AT_LEAST else EXIT_OK


def run_validate(args, settings, budget) -> int:
    mode = "strong" if args.strong else "cctrs"
    system = load_system(args.system, mode)
    print(f"OK {mode}: {len(system.rules)} rules, defined {', '.join(system.defined)}")
    return EXIT_OK


def run_reduce(args, settings, budget) -> int:
    system = load_system(args.system)
    term = read_term(args.term, system)
    match args.relation:
        case "plain":
            for target, rule, pos in sorted(PlainSearch(system, budget).steps(term), key=lambda s: (s[2], s[1], str(s[0]))):
                print(f"rule {rule} at {'.'.join(map(str, pos)) or 'ε'}: {render(target)}")
        case "quasi":
            for target in sorted(map(render, PlainSearch(system, budget).quasi_steps(term))):
                print(target)
        case "labeled":
            for step in LabeledRewriter(system, budget).labeled_steps(label(term, system)):
                print(step)
        case "labeled-quasi":
            rewriter = LabeledRewriter(system, budget)
            for target in sorted(map(render, rewriter.quasi_steps_labeled(label(term, system)))):
                print(target)
    return EXIT_OK


def run_dh(args, settings, budget) -> int:
    if args.transformed:
        system = load_system(args.system, "strong")
        term = read_term(args.term, system)
        cost = CsRewriter(transform(system), budget).derivation_height(zeta(label(term, system), system))
        print(f"cs dh = {cost}")
    else:
        system = load_system(args.system)
        term = read_term(args.term, system)
        cost = LabeledRewriter(system, budget).derivation_height(term)
        print(f"dh = {cost}")
    return _cost_exit(cost)


def run_complexity(args, settings, budget) -> int:
    system = load_system(args.system)
    cost = LabeledRewriter(system, budget).conditional_complexity(args.n, args.mode)
    print(f"{args.mode}({args.n}) = {cost}")
    return _cost_exit(cost)


def run_transform(args, settings, budget) -> int:
    system = load_system(args.system, "strong")
    trs = transform(system, args.ap)
    if args.usable:
        trs = trs.with_map(derive_usable_map(system))
    text = to_tpdb(trs, args.strategy)
    if args.output:
        with open(args.output, "w") as stream:
            stream.write(text)
        logger.info(f"Wrote {len(trs.rules)} rules to {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def run_ap(args, settings, budget) -> int:
    system = load_system(args.system)
    for pattern in anti_patterns(read_term(args.term, system), system):
        print(render(pattern))
    return EXIT_OK


def run_zeta(args, settings, budget) -> int:
    system = load_system(args.system)
    if args.inverse:
        print(render(zeta_inv(parse_term(args.term, system.variables), system)))
    else:
        print(render(zeta(label(read_term(args.term, system), system), system)))
    return EXIT_OK


def _interpretation(args, settings):
    system = load_system(args.system, "strong")
    interp = build(load_interpretation(args.interp), transform(system), args.recipe)
    return system, interp


def run_check(args, settings, budget) -> int:
    _, interp = _interpretation(args, settings)
    if args.show:
        for line in interp.render():
            print(line)
    report = check(interp, args.grid or settings.grid, settings.max_valuations)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_FAIL


def run_urm(args, settings, budget) -> int:
    system = load_system(args.system, "strong")
    for name, active in derive_usable_map(system).items():
        print(f"{name}: {{{','.join(str(i) for i in sorted(active))}}}")
    return EXIT_OK


def run_bound(args, settings, budget) -> int:
    _, interp = _interpretation(args, settings)
    grid = args.grid or settings.grid
    if not args.force:
        report = check(interp, grid, settings.max_valuations)
        if not report.passed:
            for line in report.lines():
                print(line)
            print("bound refused: interpretation is not compatible (use --force to skip the check)")
            return EXIT_FAIL
    value = bound(interp, args.n, args.mode, args.estimate, args.general, grid, settings.max_valuations)
    print(f"{args.mode}({args.n}) <= {value}")
    return EXIT_OK


COMMANDS = {
    "validate": run_validate,
    "reduce": run_reduce,
    "dh": run_dh,
    "complexity": run_complexity,
    "transform": run_transform,
    "ap": run_ap,
    "zeta": run_zeta,
    "check-interp": run_check,
    "urm": run_urm,
    "bound": run_bound,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        settings = load_config(args.config or DEFAULT_CONFIG_PATH)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    raise_recursion_limit(settings.recursion_limit)
    budget = SearchBudget(args.budget_states or settings.budget_states, args.budget_depth or settings.budget_depth)

    try:
        return COMMANDS[args.command](args, settings, budget)
    except InvalidSystem as e:
        for violation in e.report.violations:
            print(violation)
        return EXIT_FAIL
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except CtrcError as e:
        logger.error(f"{e.code}: {e}")
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
