"""
Command-line surface: `mps check`, `mps oracle` and `mps fuzz`.

Exit codes: 0 proved (or a passing command), 1 disproved, 2 input error,
3 verification mismatch or failing fuzz campaign. stdout carries only the
report, which is identical for identical inputs; diagnostics and timing go
to the log on stderr.
"""
import argparse
import logging
import sys
from dataclasses import dataclass
from typing import List, Optional

from src.core.arena import ArenaError, GameArena
from src.core.cost import CostConfigError, CostModel, ExtCost, describe_weights, format_cost
from src.core.engine import SearchError, Verdict, mps_solve, select_child
from src.core.formula import Formula, FormulaSyntaxError, UnknownSymbolError, format_formula, parse_formula
from src.core.games import GAMES
from src.core.oracle import min_cost
from src.core.proof import FORMATS, ProofFormatError, check_proof, extract
from src.core.verification import AXIOM_SAMPLES, ENUMERATION_LIMIT, run_campaign, summarize, worst_child
from src.data.generator import InstanceBounds
from src.data.loader import load_arena_file, load_cost_option
from src.utils.exporters import write_campaign_report, write_proof

logger = logging.getLogger(__name__)

EXIT_PROVED = 0
EXIT_DISPROVED = 1
EXIT_INPUT_ERROR = 2
EXIT_MISMATCH = 3

INPUT_ERRORS = (ArenaError, FormulaSyntaxError, UnknownSymbolError, CostConfigError, ProofFormatError, OSError)


@dataclass(frozen=True)
class RunReport:
    state: str
    formula: str
    model: str
    verdict: Verdict
    cost: ExtCost
    expansions: int
    iterations: int
    elapsed: float
    weights: str = ""

    def render(self) -> str:
        """Report lines for stdout; elapsed time is left out so reruns compare equal."""
        lines = [f"state: {self.state}", f"formula: {self.formula}", f"model: {self.model}"]
        if self.weights:
            lines.append(f"weights: {self.weights}")
        lines += [
            f"verdict: {self.verdict.value}",
            f"cost: {format_cost(self.cost)}",
            f"expansions: {self.expansions}",
            f"iterations: {self.iterations}",
        ]
        return "\n".join(lines)


def _load_problem(args) -> tuple:
    if args.game is not None:
        arena: GameArena = GAMES[args.game]()
    else:
        arena = load_arena_file(args.arena)
    arena.check_state(args.state)
    phi = parse_formula(args.formula, arena)
    model = load_cost_option(args.cost)
    return arena, args.state, phi, model


def cmd_check(args) -> int:
    arena, q, phi, model = _load_problem(args)
    result = mps_solve(arena, q, phi, model)
    report = RunReport(str(q), format_formula(phi), model.name, result.verdict, result.cost,
                       result.expansions, result.iterations, result.elapsed, describe_weights(model))
    print(report.render())
    logger.info("Elapsed: %.4fs", report.elapsed)

    tree = extract(model, result.root)
    if args.export_proof:
        write_proof(tree, args.export_proof, args.format, model)

    status = EXIT_PROVED if result.verdict is Verdict.PROVED else EXIT_DISPROVED
    if args.verify:
        verdict = check_proof(arena, tree)
        print(f"proof check: {verdict.describe()}")
        if not verdict:
            status = EXIT_MISMATCH
    if args.oracle:
        status = _compare_with_oracle(arena, q, phi, model, result.verdict, result.cost, status)
    return status


def _compare_with_oracle(arena, q, phi: Formula, model: CostModel, verdict: Verdict, cost: ExtCost, status: int) -> int:
    expected = min_cost(arena, q, phi, model)
    minimal = expected.min_proof_cost if expected.holds else expected.min_disproof_cost
    problems = []
    if expected.holds != (verdict is Verdict.PROVED):
        problems.append(f"holds={str(expected.holds).lower()}")
    if minimal != cost:
        problems.append(f"minimal cost {format_cost(minimal)}")
    if problems:
        print(f"oracle: mismatch ({', '.join(problems)})")
        return EXIT_MISMATCH
    print("oracle: agrees")
    return status


def cmd_oracle(args) -> int:
    arena, q, phi, model = _load_problem(args)
    result = min_cost(arena, q, phi, model)
    lines = [f"state: {q}", f"formula: {format_formula(phi)}", f"model: {model.name}"]
    if describe_weights(model):
        lines.append(f"weights: {describe_weights(model)}")
    print("\n".join(lines + [
        f"holds: {str(result.holds).lower()}",
        f"min proof cost: {format_cost(result.min_proof_cost)}",
        f"min disproof cost: {format_cost(result.min_disproof_cost)}",
    ]))
    return EXIT_PROVED


def cmd_fuzz(args) -> int:
    models = [load_cost_option(option) for option in args.cost] if args.cost else None
    selector = worst_child if args.negative_control else select_child
    result = run_campaign(args.seed, args.cases, args.bounds, models=models, selector=selector,
                          axiom_samples=args.axiom_samples, enumeration_limit=args.proof_bound)
    print(summarize(result), end="")
    if args.report:
        write_campaign_report(result, args.report)
    if not result.passed:
        if result.failure is not None:
            print(f"first failure: {result.failure['check']}")
            print(result.replay(), end="")
        return EXIT_MISMATCH
    return EXIT_PROVED


def _add_problem_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--arena", help="Arena document (JSON)")
    source.add_argument("--game", choices=sorted(GAMES), help="Built-in programmatic arena")
    parser.add_argument("--state", required=True, help="Root state id")
    parser.add_argument("--formula", required=True, help="Formula, e.g. \"[a]p | <b>!q\"")
    parser.add_argument("--cost", default="query_count",
                        help="depth, query_count, weighted or weighted:PATH (default: query_count)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="Log search summaries on stderr")
    common.add_argument("--trace", action="store_true", help="Log every search iteration on stderr")
    parser = argparse.ArgumentParser(prog="mps", description="Minimal proof search for multi-agent modal logic K")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", parents=[common], help="Run the search and report the verdict")
    _add_problem_arguments(check)
    check.add_argument("--export-proof", metavar="PATH", help="Write the extracted (dis)proof")
    check.add_argument("--format", choices=FORMATS, default="structured", help="Proof export format")
    check.add_argument("--verify", action="store_true", help="Check the extracted (dis)proof against the arena")
    check.add_argument("--oracle", action="store_true", help="Compare verdict and cost with brute force")
    check.set_defaults(handler=cmd_check)

    oracle = commands.add_parser("oracle", parents=[common], help="Brute-force verdict and minimal costs")
    _add_problem_arguments(oracle)
    oracle.set_defaults(handler=cmd_oracle)

    fuzz = commands.add_parser("fuzz", parents=[common], help="Compare the search with brute force on random instances")
    fuzz.add_argument("--seed", type=int, default=42)
    fuzz.add_argument("--cases", type=int, default=1000)
    fuzz.add_argument("--cost", action="append", help="Restrict to these cost models (repeatable)")
    fuzz.add_argument("--max-states", type=int, default=6)
    fuzz.add_argument("--max-agents", type=int, default=2)
    fuzz.add_argument("--max-atoms", type=int, default=3)
    fuzz.add_argument("--max-branching", type=int, default=3)
    fuzz.add_argument("--max-formula-size", type=int, default=8)
    fuzz.add_argument("--proof-bound", type=int, default=ENUMERATION_LIMIT,
                      help="Enumerate all (dis)proofs when the exploration tree has at most this many nodes")
    fuzz.add_argument("--axiom-samples", type=int, default=AXIOM_SAMPLES)
    fuzz.add_argument("--report", metavar="PATH", help="Write the per-run table (.csv or .xlsx)")
    fuzz.add_argument("--negative-control", action="store_true", help=argparse.SUPPRESS)
    fuzz.set_defaults(handler=cmd_fuzz)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "fuzz":
        if args.cases < 0:
            parser.error(f"--cases must be non-negative, got {args.cases}")
        try:
            args.bounds = InstanceBounds(args.max_states, args.max_agents, args.max_atoms,
                                         args.max_branching, args.max_formula_size)
        except ValueError as e:
            parser.error(str(e))
    level = logging.DEBUG if args.trace else logging.INFO if args.verbose else logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)
    try:
        return args.handler(args)
    except (*INPUT_ERRORS, SearchError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except RecursionError:
        # Diamonds and disjunctions desugar into trees deeper than the parser recursed
        print("error: formula nested too deeply", file=sys.stderr)
        return EXIT_INPUT_ERROR
