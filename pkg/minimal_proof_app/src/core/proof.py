"""
Proofs and disproofs: extraction from solved search trees, independent
checking against the arena, and serialization.
"""
import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import networkx as nx
import pydot

from .arena import ArenaError, GameArena, StateId
from .cost import CostModel, Polarity, format_cost, proof_cost
from .engine import SearchError, SearchNode
from .formula import And, Atom, Box, Formula, FormulaSyntaxError, Not, UnknownSymbolError, format_formula, parse_formula

logger = logging.getLogger(__name__)

FORMATS = ("structured", "dot")


class ProofFormatError(ValueError):
    """Raised for unknown export formats and malformed structured proofs."""


@dataclass(frozen=True)
class ProofTree:
    """A proof (or disproof) node: its label, polarity and children."""
    state: StateId
    formula: Formula
    polarity: Polarity
    children: Tuple["ProofTree", ...] = ()

    @property
    def label(self):
        return self.state, self.formula

    def node_count(self) -> int:
        return 1 + sum(child.node_count() for child in self.children)


@dataclass(frozen=True)
class ProofCheck:
    """Outcome of check_proof; truthy iff the tree is valid."""
    ok: bool
    reason: str = ""
    path: Tuple[int, ...] = ()

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        address = "/".join(str(i) for i in self.path) or "root"
        return f"{self.reason} at {address}"


def extract(model: CostModel, root: SearchNode) -> ProofTree:
    """
    Extracts the minimal (dis)proof contained in a solved search tree.

    Proved conjunctions and boxes keep all their children. Disproved ones
    keep one disproved child among those minimizing the aggregated mdn,
    the earliest on ties. Negations keep their child with flipped polarity.

    Raises:
    SearchError: If the root is not solved.
    """
    if not root.solved:
        raise SearchError(f"Cannot extract a proof from unsolved node {root!r}")
    polarity = Polarity.PROOF if root.proved else Polarity.DISPROOF
    return _extract(model, root, polarity)


def _extract(model: CostModel, node: SearchNode, polarity: Polarity) -> ProofTree:
    phi = node.formula
    if isinstance(phi, Atom):
        return ProofTree(node.state, phi, polarity)
    if isinstance(phi, Not):
        child = _extract(model, node.children[0], polarity.flipped())
        return ProofTree(node.state, phi, polarity, (child,))
    if polarity is Polarity.PROOF:
        children = tuple(_extract(model, child, polarity) for child in node.children)
        return ProofTree(node.state, phi, polarity, children)

    if isinstance(phi, Box):
        scores = [model.agg_box(phi.agent, [child.mdn]) for child in node.children]
    else:
        scores = [model.agg_conj([child.mdn]) for child in node.children]
    best = min(scores)
    candidates = [i for i, child in enumerate(node.children) if scores[i] == best and child.disproved]
    if not candidates:
        disproved = [i for i, child in enumerate(node.children) if child.disproved]
        logger.warning(
            "No disproved child of (%s, %s) reaches the minimal disproof number %s",
            node.state, format_formula(phi), format_cost(best),
        )
        candidates = [min(disproved, key=scores.__getitem__)]
    child = _extract(model, node.children[candidates[0]], polarity)
    return ProofTree(node.state, phi, polarity, (child,))


def _fail(reason: str, path: Tuple[int, ...]) -> ProofCheck:
    return ProofCheck(False, reason, path)


def check_proof(arena: GameArena, tree: ProofTree) -> ProofCheck:
    """
    Checks a (dis)proof against the arena, clause by clause.

    Only arena queries and tree structure are used, never effort numbers.

    Returns:
    ProofCheck: Valid, or the first violated clause and the address of the
    offending node (child indices from the root).
    """
    return _check(arena, tree, ())


def _check_children(arena, tree, expected, path) -> ProofCheck:
    for index, (child, (state, formula, polarity)) in enumerate(zip(tree.children, expected)):
        if child.state != state or child.formula != formula:
            return _fail("child label mismatch", path + (index,))
        if child.polarity is not polarity:
            return _fail("child polarity mismatch", path + (index,))
    for index, child in enumerate(tree.children):
        verdict = _check(arena, child, path + (index,))
        if not verdict:
            return verdict
    return ProofCheck(True)


def _check(arena: GameArena, tree: ProofTree, path: Tuple[int, ...]) -> ProofCheck:
    q, phi, polarity = tree.state, tree.formula, tree.polarity
    proving = polarity is Polarity.PROOF
    try:
        if isinstance(phi, Atom):
            if tree.children:
                return _fail("atom node has children", path)
            holds = phi.name in arena.labels(q)
            if proving and not holds:
                return _fail("atom not in labels", path)
            if not proving and holds:
                return _fail("atom in labels", path)
            return ProofCheck(True)

        if isinstance(phi, Not):
            if len(tree.children) != 1:
                return _fail("negation needs exactly one child", path)
            return _check_children(arena, tree, [(q, phi.body, polarity.flipped())], path)

        if isinstance(phi, And):
            if proving:
                conjuncts = [phi.left] if phi.shared else [phi.left, phi.right]
                found = sorted((child.formula for child in tree.children), key=format_formula)
                if len(tree.children) != len(conjuncts) or found != sorted(conjuncts, key=format_formula):
                    return _fail("conjunction proof must cover both conjuncts", path)
                expected = [(q, child.formula, polarity) for child in tree.children]
                return _check_children(arena, tree, expected, path)
            if len(tree.children) != 1:
                return _fail("conjunction disproof needs exactly one child", path)
            chosen = tree.children[0].formula
            if chosen not in (phi.left, phi.right):
                return _fail("child label mismatch", path + (0,))
            return _check_children(arena, tree, [(q, chosen, polarity)], path)

        if isinstance(phi, Box):
            moves = arena.successors(q, phi.agent)
            if proving:
                states = [child.state for child in tree.children]
                for nxt in moves:
                    if nxt not in states:
                        return _fail("missing successor", path)
                if len(states) != len(moves) or len(set(states)) != len(states):
                    return _fail("unexpected child", path)
                expected = [(child.state, phi.body, polarity) for child in tree.children]
                return _check_children(arena, tree, expected, path)
            if len(tree.children) != 1:
                return _fail("box disproof needs exactly one child", path)
            if tree.children[0].state not in moves:
                return _fail("child is not a successor", path + (0,))
            return _check_children(arena, tree, [(tree.children[0].state, phi.body, polarity)], path)
    except ArenaError as e:
        return _fail(f"arena query failed: {e}", path)
    return _fail("not a formula", path)


def _to_record(tree: ProofTree) -> Dict[str, Any]:
    return {
        "state": tree.state,
        "formula": format_formula(tree.formula),
        "polarity": tree.polarity.value,
        "children": [_to_record(child) for child in tree.children],
    }


def _from_record(record: Any, arena: Optional[GameArena]) -> ProofTree:
    if not isinstance(record, dict) or set(record) != {"state", "formula", "polarity", "children"}:
        raise ProofFormatError("Each proof node needs exactly: state, formula, polarity, children.")
    try:
        formula = parse_formula(record["formula"], arena)
        polarity = Polarity(record["polarity"])
    except (FormulaSyntaxError, UnknownSymbolError, ValueError) as e:
        raise ProofFormatError(f"Invalid proof node: {e}") from e
    if not isinstance(record["children"], list):
        raise ProofFormatError("'children' must be a list.")
    children = tuple(_from_record(child, arena) for child in record["children"])
    return ProofTree(record["state"], formula, polarity, children)


def proof_graph(tree: ProofTree, model: Optional[CostModel] = None) -> nx.DiGraph:
    """
    One graph node per proof node, named n0, n1, ... in pre-order.

    Node attributes: label ("q |= phi" or "q |/= phi" with the subtree
    cost when a model is given), polarity and depth.
    """
    graph = nx.DiGraph()

    def visit(node: ProofTree, depth: int) -> str:
        name = f"n{graph.number_of_nodes()}"
        relation = "⊨" if node.polarity is Polarity.PROOF else "⊭"
        label = f"{node.state} {relation} {format_formula(node.formula)}"
        if model is not None:
            label += f" (cost {format_cost(proof_cost(model, node))})"
        graph.add_node(name, label=label, polarity=node.polarity.value, depth=depth)
        for child in node.children:
            graph.add_edge(name, visit(child, depth + 1))
        return name

    visit(tree, 0)
    return graph


def _dot_string(text: str) -> str:
    """Double-quoted DOT string; state ids may contain quotes and backslashes."""
    return '"' + text.replace('\\', '\\\\').replace('"', '\\"') + '"'


def serialize_proof(tree: ProofTree, fmt: str, model: Optional[CostModel] = None) -> str:
    """
    Serializes a (dis)proof.

    Parameters:
    tree (ProofTree): The tree to write.
    fmt (str): "structured" (nested JSON records) or "dot" (Graphviz).
    model (CostModel, optional): Adds subtree costs to DOT labels.

    Returns:
    str: Deterministic text output.

    Raises:
    ProofFormatError: If the format is unknown.
    """
    if fmt == "structured":
        return json.dumps(_to_record(tree), indent=2, ensure_ascii=False) + "\n"
    if fmt == "dot":
        graph = proof_graph(tree, model)
        dot = pydot.Dot("proof", graph_type="digraph")
        for name, data in graph.nodes(data=True):
            shape = "box" if data["polarity"] == Polarity.PROOF.value else "ellipse"
            dot.add_node(pydot.Node(name, label=_dot_string(data["label"]), shape=shape))
        for source, target in graph.edges():
            dot.add_edge(pydot.Edge(source, target, style="solid"))
        return dot.to_string()
    raise ProofFormatError(f"Unknown proof format '{fmt}'; expected one of {', '.join(FORMATS)}.")


def parse_proof(text: str, arena: Optional[GameArena] = None) -> ProofTree:
    """Reads back a structured proof; names are resolved against the arena when given."""
    try:
        record = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProofFormatError(f"Invalid proof document: {e.msg} (line {e.lineno}, column {e.colno})") from e
    return _from_record(record, arena)
