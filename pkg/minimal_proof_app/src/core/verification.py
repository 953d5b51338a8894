"""
Engine-versus-oracle verification.

`run_case` solves one instance under one cost model and checks every
guarantee of the search against brute force: the verdict, minimality and
cost of the extracted (dis)proof, its validity, admissibility of the
heuristics on every reachable label, monotonicity and lower-bound
behaviour of the effort numbers, their agreement with the (dis)proofs
already explored, the iteration bound and locality of arena queries.
`run_campaign` repeats this over seeded random instances and collects the
results in a pandas DataFrame.
"""
import dataclasses
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.data.generator import Instance, InstanceBounds, random_instance
from .arena import QueryRecorder
from .cost import (
    BUILTIN_MODELS,
    INFINITY,
    CostModel,
    Polarity,
    aggregator_violations,
    format_cost,
    heuristic_disproof,
    heuristic_proof,
    proof_cost,
)
from .engine import NodeKind, SearchError, SearchNode, Selector, exploration_tree_size, mps_solve, select_child
from .formula import Atom, Box, Not, format_formula
from .oracle import MinimalCostTable, all_labels, enumerate_proofs, naive_model_check
from .proof import ProofTree, check_proof, extract

logger = logging.getLogger(__name__)

ENUMERATION_LIMIT = 30
SNAPSHOT_LIMIT = 400
AXIOM_SAMPLES = 10_000
SAMPLE_COSTS = np.array([0.0, 0.5, 1.0, 2.0, INFINITY])

CHECKS = (
    "verdict",
    "minimality",
    "cost identity",
    "proof validity",
    "mutation",
    "admissibility",
    "enumeration",
    "monotonicity",
    "lower bound",
    "solving",
    "termination",
    "locality",
)


@dataclass
class CaseOutcome:
    """One row of a campaign table plus the first violated check, if any."""
    row: Dict[str, Any]
    failure: Optional[Tuple[str, str]] = None

    @property
    def passed(self) -> bool:
        return self.failure is None


@dataclass
class CampaignResult:
    table: pd.DataFrame
    axiom_violations: Dict[str, List[str]] = field(default_factory=dict)
    failure: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.failure is None and not any(self.axiom_violations.values())

    def replay(self) -> str:
        """The first failing case as indented JSON, or an empty string."""
        if self.failure is None:
            return ""
        return json.dumps(self.failure, indent=2, ensure_ascii=False) + "\n"


def worst_child(model: CostModel, node: SearchNode) -> SearchNode:
    """
    A deliberately wrong selection policy: the unsolved child with the largest
    aggregated mdn. Searches still terminate but lose minimality.
    """
    def score(child: SearchNode) -> float:
        if isinstance(node.formula, Box):
            return model.agg_box(node.formula.agent, [child.mdn])
        return model.agg_conj([child.mdn])

    return max((child for child in node.children if not child.solved), key=score)


def solving_violations(root: SearchNode) -> List[str]:
    """
    Nodes whose infinite effort numbers disagree with their explored subtree.

    A node must have mdn = inf exactly when its explored subtree already
    contains a proof of its label, and mpn = inf exactly when it contains a
    disproof. Unexpanded leaves contain neither.
    """
    violations = []

    def visit(node: SearchNode) -> Tuple[bool, bool]:
        if node.kind is NodeKind.TERMINAL:
            has_proof, has_disproof = node.terminal_info[1] == INFINITY, node.terminal_info[0] == INFINITY
        elif node.kind is NodeKind.LEAF:
            has_proof = has_disproof = False
        else:
            found = [visit(child) for child in node.children]
            if isinstance(node.formula, Not):
                has_disproof, has_proof = found[0]
            else:
                has_proof = all(proof for proof, _ in found)
                has_disproof = any(disproof for _, disproof in found)
        if node.proved != has_proof or node.disproved != has_disproof:
            violations.append(
                f"{node!r} but explored subtree has proof={has_proof}, disproof={has_disproof}"
            )
        return has_proof, has_disproof

    visit(root)
    return violations


class _SnapshotAudit:
    """Snapshot hook checking that effort numbers only grow, stay below the oracle and mark solved subtrees."""

    def __init__(self, table: MinimalCostTable):
        self.table = table
        self.seen: Dict[SearchNode, Tuple[float, float]] = {}
        self.violations: Dict[str, str] = {}

    def __call__(self, root: SearchNode, iteration: int) -> None:
        for node in root.iter_nodes():
            previous = self.seen.get(node)
            if previous is not None and (node.mpn < previous[0] or node.mdn < previous[1]):
                self._record("monotonicity", f"{node!r} decreased from {previous} at iteration {iteration}")
            self.seen[node] = node.info
            min_proof = self.table.min_proof(node.state, node.formula)
            min_disproof = self.table.min_disproof(node.state, node.formula)
            if node.mpn > min_proof or node.mdn > min_disproof:
                self._record(
                    "lower bound",
                    f"{node!r} exceeds minimal costs ({format_cost(min_proof)}, {format_cost(min_disproof)}) "
                    f"at iteration {iteration}",
                )
        for message in solving_violations(root)[:1]:
            self._record("solving", f"{message} at iteration {iteration}")

    def _record(self, check: str, message: str) -> None:
        self.violations.setdefault(check, message)


def _replace_at(tree: ProofTree, path: Tuple[int, ...], new: ProofTree) -> ProofTree:
    if not path:
        return new
    children = list(tree.children)
    children[path[0]] = _replace_at(children[path[0]], path[1:], new)
    return dataclasses.replace(tree, children=tuple(children))


def _walk(tree: ProofTree, path: Tuple[int, ...] = ()) -> Iterable[Tuple[Tuple[int, ...], ProofTree]]:
    yield path, tree
    for index, child in enumerate(tree.children):
        yield from _walk(child, path + (index,))


def mutation_failures(arena, tree: ProofTree) -> List[str]:
    """
    Applies two corruptions to a valid (dis)proof and checks that each is rejected with the expected reason.

    - drop a box child: remove the first child of the first proved box
      with children; expected "missing successor" at that box.
    - flip an atom: invert the polarity of the first atom leaf; expected
      "child polarity mismatch" at the leaf, or the atom clause when the
      leaf is the root.
    """
    failures = []
    for path, node in _walk(tree):
        if isinstance(node.formula, Box) and node.polarity is Polarity.PROOF and node.children:
            mutant = _replace_at(tree, path, dataclasses.replace(node, children=node.children[1:]))
            verdict = check_proof(arena, mutant)
            if verdict.reason != "missing successor" or verdict.path != path:
                failures.append(f"dropped box child at {path} gave: {verdict.describe()}")
            break

    for path, node in _walk(tree):
        if isinstance(node.formula, Atom):
            flipped = dataclasses.replace(node, polarity=node.polarity.flipped())
            verdict = check_proof(arena, _replace_at(tree, path, flipped))
            if path:
                expected = "child polarity mismatch"
            else:
                expected = "atom not in labels" if flipped.polarity is Polarity.PROOF else "atom in labels"
            if verdict.reason != expected or verdict.path != path:
                failures.append(f"flipped atom at {path} gave: {verdict.describe()}")
            break
    return failures


def run_case(
    instance: Instance,
    model: CostModel,
    selector: Selector = select_child,
    enumeration_limit: int = ENUMERATION_LIMIT,
    snapshot_limit: int = SNAPSHOT_LIMIT,
) -> CaseOutcome:
    """
    Solves one instance and checks it against the oracle.

    Parameters:
    - instance: Arena, root state and formula.
    - model: Cost model of the search and the oracle.
    - selector: Selection policy handed to the engine.
    - enumeration_limit: Enumerate all (dis)proofs when the full exploration
      tree has at most this many nodes.
    - snapshot_limit: Audit every node after every iteration when the full
      exploration tree has at most this many nodes.

    Returns:
    CaseOutcome: The table row and the first violated check, in the order of CHECKS.
    """
    arena, q, phi = instance.arena, instance.state, instance.formula
    table = MinimalCostTable(arena, model)
    tree_size = exploration_tree_size(arena, q, phi)
    audit = _SnapshotAudit(table) if tree_size <= snapshot_limit else None
    recorder = QueryRecorder(arena)
    row = {
        "model": model.name,
        "state": q,
        "formula": format_formula(phi),
        "formula_size": phi.size,
        "modal_depth": phi.modal_depth,
        "tree_size": tree_size,
    }
    failures: Dict[str, str] = {}

    try:
        result = mps_solve(recorder, q, phi, model, selector=selector, snapshot_hook=audit)
    except SearchError as e:
        row["failure"] = "search"
        return CaseOutcome(row, ("search", str(e)))

    holds = naive_model_check(arena, q, phi)
    minimal = table.min_cost(q, phi, result.polarity)
    tree = extract(model, result.root)
    extracted_cost = proof_cost(model, tree)
    row.update(
        verdict=result.verdict.value,
        holds=holds,
        cost=result.cost,
        extracted_cost=extracted_cost,
        min_cost=minimal,
        expansions=result.expansions,
        iterations=result.iterations,
        proof_nodes=tree.node_count(),
    )

    if holds != result.root.proved:
        failures["verdict"] = f"search says {result.verdict.value}, model checking says holds={holds}"
    if extracted_cost != minimal:
        failures["minimality"] = (
            f"extracted {tree.polarity.value} costs {format_cost(extracted_cost)}, minimum is {format_cost(minimal)}"
        )
    if extracted_cost != result.cost:
        failures["cost identity"] = (
            f"root number {format_cost(result.cost)} differs from extracted cost {format_cost(extracted_cost)}"
        )
    verdict = check_proof(arena, tree)
    if not verdict:
        failures["proof validity"] = verdict.describe()
    else:
        mutants = mutation_failures(arena, tree)
        if mutants:
            failures["mutation"] = "; ".join(mutants)

    for state, formula in all_labels(arena, q, phi):
        bounds = heuristic_proof(model, formula), heuristic_disproof(model, formula)
        minima = table.min_proof(state, formula), table.min_disproof(state, formula)
        if bounds[0] > minima[0] or bounds[1] > minima[1]:
            failures["admissibility"] = (
                f"I={format_cost(bounds[0])}, J={format_cost(bounds[1])} on ({state}, {format_formula(formula)}) "
                f"exceed MinP={format_cost(minima[0])}, MinD={format_cost(minima[1])}"
            )
            break

    min_proof, min_disproof = table.min_proof(q, phi), table.min_disproof(q, phi)

    row["enumerated"] = tree_size <= enumeration_limit
    if row["enumerated"]:
        enumeration = enumerate_proofs(arena, q, phi, tree_size)
        problems = []
        for trees, bound, best in (
            (enumeration.proofs, heuristic_proof(model, phi), min_proof),
            (enumeration.disproofs, heuristic_disproof(model, phi), min_disproof),
        ):
            costs = [proof_cost(model, candidate) for candidate in trees]
            if any(bound > cost for cost in costs):
                problems.append(f"heuristic {format_cost(bound)} above an enumerated cost")
            if min(costs, default=INFINITY) != best:
                problems.append(f"cheapest enumerated {format_cost(min(costs, default=INFINITY))} != {format_cost(best)}")
        if enumeration.truncated:
            problems.append("enumeration truncated")
        if problems:
            failures["enumeration"] = "; ".join(problems)

    if audit is not None:
        failures.update(audit.violations)
    if "solving" not in failures:
        for message in solving_violations(result.root)[:1]:
            failures["solving"] = f"{message} after the search"
    if result.root.proved == result.root.disproved:
        failures["termination"] = f"root ended with {result.root!r}, expected exactly one infinite number"
    elif result.iterations > tree_size:
        failures["termination"] = f"{result.iterations} iterations for an exploration tree of {tree_size} nodes"
    reachable = arena.states_within(q, phi.modal_depth)
    outside = sorted(str(state) for state in recorder.queried if state not in reachable)
    if outside:
        failures["locality"] = f"queried {', '.join(outside)} beyond modal depth {phi.modal_depth}"

    for check in CHECKS:
        if check in failures:
            row["failure"] = check
            return CaseOutcome(row, (check, failures[check]))
    row["failure"] = ""
    return CaseOutcome(row)


def check_aggregators(model: CostModel, agents: Iterable[str], rng: np.random.Generator, samples: int = AXIOM_SAMPLES) -> List[str]:
    """
    Samples multisets of up to six costs from SAMPLE_COSTS and checks the aggregator axioms.

    The sample values are dyadic, so float sums stay exact and order
    sensitivity is never a rounding artefact.

    Returns:
    list: One message per violating sample, empty when all axioms hold.
    """
    agents = list(agents)
    violations = []
    for _ in range(samples):
        values = [float(value) for value in rng.choice(SAMPLE_COSTS, size=int(rng.integers(0, 7)) + 2)]
        x, y = sorted(values[:2])
        multiset = values[2:]
        agent = agents[int(rng.integers(len(agents)))]
        for violation in aggregator_violations(model, agent, multiset, x, y):
            violations.append(f"{model.name} {violation} on X={multiset}, x={x}, y={y}")
    return violations


def run_campaign(
    seed: int,
    cases: int,
    bounds: InstanceBounds = InstanceBounds(),
    models: Optional[Iterable[CostModel]] = None,
    selector: Selector = select_child,
    axiom_samples: int = AXIOM_SAMPLES,
    enumeration_limit: int = ENUMERATION_LIMIT,
) -> CampaignResult:
    """
    Runs `cases` random instances under every model and tabulates the results.

    Parameters:
    - seed: Seed of the numpy Generator drawing instances and axiom samples.
    - cases: Number of random instances.
    - bounds: Instance size limits.
    - models: Cost models to check, all builtin models by default.
    - selector: Selection policy handed to the engine.
    - axiom_samples: Aggregator axiom samples per model.
    - enumeration_limit: Exploration tree size up to which all (dis)proofs are enumerated.

    Returns:
    CampaignResult: One row per (case, model), aggregator violations per
    model and a replay record of the first failing case.
    """
    if cases < 0:
        raise ValueError(f"cases must be non-negative, got {cases}.")
    models = list(models) if models is not None else list(BUILTIN_MODELS.values())
    rng = np.random.default_rng(seed)
    rows = []
    failure = None

    for case in range(cases):
        instance = random_instance(rng, bounds)
        for model in models:
            outcome = run_case(instance, model, selector=selector, enumeration_limit=enumeration_limit)
            rows.append({"case": case, "states": len(instance.arena.states), **outcome.row})
            if outcome.failure is not None and failure is None:
                check, message = outcome.failure
                failure = {"case": case, "model": model.name, "check": check, "message": message, **instance.to_record()}
                logger.warning("Case %d (%s) failed %s: %s", case, model.name, check, message)

    agents = [f"a{i}" for i in range(bounds.max_agents)]
    axiom_violations = {model.name: check_aggregators(model, agents, rng, axiom_samples) for model in models}

    table = pd.DataFrame(rows, columns=["case", "states", "model", "state", "formula", "formula_size",
                                        "modal_depth", "tree_size", "verdict", "holds", "cost",
                                        "extracted_cost", "min_cost", "expansions", "iterations",
                                        "proof_nodes", "enumerated", "failure"])
    logger.info("Campaign seed=%d: %d cases, %d rows, %s", seed, cases, len(table), "passed" if failure is None else "failed")
    return CampaignResult(table, axiom_violations, failure)


def summarize(result: CampaignResult) -> str:
    """Plain-text summary of a campaign, stable for identical inputs."""
    table = result.table
    lines = [
        f"cases: {table['case'].nunique() if len(table) else 0}",
        f"runs: {len(table)}",
        f"enumerated: {int(table['enumerated'].sum()) if len(table) else 0}",
        f"failures: {int((table['failure'] != '').sum()) if len(table) else 0}",
    ]
    for name, violations in result.axiom_violations.items():
        lines.append(f"aggregator axioms ({name}): {len(violations)} violations")
    if len(table):
        for name, group in table.groupby("model", sort=False):
            lines.append(
                f"{name}: proved {int((group['verdict'] == 'proved').sum())}, "
                f"disproved {int((group['verdict'] == 'disproved').sum())}, "
                f"max expansions {int(group['expansions'].max())}"
            )
    lines.append(f"result: {'passed' if result.passed else 'failed'}")
    return "\n".join(lines) + "\n"
