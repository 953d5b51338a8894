"""
Minimal proof search: a best-first search over exploration trees.

Every node carries a minimal proof number (mpn) and a minimal disproof number
(mdn), lower bounds on the cost of any proof or disproof of its (state,
formula) label. Leaves start from the heuristics I and J, internal nodes
aggregate their children, and the descent always follows the child with the
smallest aggregated mdn. The search stops once the root has an infinite
number: mdn = inf means proved, mpn = inf means disproved, and the finite
number left is the cost of a minimal (dis)proof.
"""
import enum
import logging
import time
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Tuple

from .arena import ArenaError, GameArena, StateId
from .cost import INFINITY, CostModel, ExtCost, Polarity, conjunction_inputs, format_cost, heuristic_disproof, heuristic_proof
from .formula import And, Atom, Box, Formula, Not, format_formula

logger = logging.getLogger(__name__)

Label = Tuple[StateId, Formula]
Info = Tuple[ExtCost, ExtCost]


class SearchError(RuntimeError):
    """Raised on engine contract violations and on arena failures during a search."""


class NodeKind(enum.Enum):
    LEAF = "leaf"
    INTERNAL = "internal"
    TERMINAL = "terminal"


class Verdict(enum.Enum):
    PROVED = "proved"
    DISPROVED = "disproved"


class SearchNode:
    """A node of the exploration tree."""

    __slots__ = ("state", "formula", "mpn", "mdn", "children", "parent", "kind", "terminal_info")

    def __init__(self, label: Label, info: Info, parent: Optional["SearchNode"] = None):
        self.state, self.formula = label
        self.mpn, self.mdn = info
        self.children: List[SearchNode] = []
        self.parent = parent
        self.kind = NodeKind.LEAF
        self.terminal_info: Optional[Info] = None

    @property
    def label(self) -> Label:
        return self.state, self.formula

    @property
    def info(self) -> Info:
        return self.mpn, self.mdn

    @property
    def proved(self) -> bool:
        return self.mdn == INFINITY

    @property
    def disproved(self) -> bool:
        return self.mpn == INFINITY

    @property
    def solved(self) -> bool:
        return self.proved or self.disproved

    def iter_nodes(self) -> Iterator["SearchNode"]:
        """Pre-order walk of the subtree rooted here."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def __repr__(self):
        return (
            f"SearchNode(({self.state}, {format_formula(self.formula)}), "
            f"mpn={format_cost(self.mpn)}, mdn={format_cost(self.mdn)}, kind={self.kind.value})"
        )


@dataclass
class SearchResult:
    root: SearchNode
    verdict: Verdict
    expansions: int
    iterations: int
    elapsed: float = 0.0

    @property
    def cost(self) -> ExtCost:
        """Cost of the minimal (dis)proof, the root's finite effort number."""
        return self.root.mpn if self.verdict is Verdict.PROVED else self.root.mdn

    @property
    def polarity(self) -> Polarity:
        return Polarity.PROOF if self.verdict is Verdict.PROVED else Polarity.DISPROOF


Selector = Callable[[CostModel, SearchNode], SearchNode]
SnapshotHook = Callable[[SearchNode, int], None]


def init_leaf(model: CostModel, label: Label) -> Info:
    _, phi = label
    return heuristic_proof(model, phi), heuristic_disproof(model, phi)


def info_term(model: CostModel, arena: GameArena, label: Label) -> Info:
    """Values of a resolved atom: (k(p), inf) when p holds in q, (inf, k(p)) otherwise."""
    q, phi = label
    if not isinstance(phi, Atom):
        raise SearchError(f"info_term expects an atom, got {format_formula(phi)}")
    cost = model.base_cost(phi.name)
    if phi.name in arena.labels(q):
        return cost, INFINITY
    return INFINITY, cost


def _disproof_score(model: CostModel, node: SearchNode, child: SearchNode) -> ExtCost:
    if isinstance(node.formula, Box):
        return model.agg_box(node.formula.agent, [child.mdn])
    return model.agg_conj([child.mdn])


def update_node(model: CostModel, node: SearchNode) -> Info:
    """
    Effort numbers of a node from its current children.

    negation:     (mdn(c), mpn(c))
    conjunction:  (A_and({mpn(c)}), min_c A_and({mdn(c)}))
    box:          (A_box(a, {mpn(c)}), min_c A_box(a, {mdn(c)}))

    A box without children is vacuously proved: (A_box(a, {}), inf).
    """
    if node.kind is NodeKind.TERMINAL:
        return node.terminal_info
    if node.kind is NodeKind.LEAF:
        return node.info
    phi = node.formula
    if isinstance(phi, Not):
        child = node.children[0]
        return child.mdn, child.mpn
    proof_numbers = [child.mpn for child in node.children]
    disproof = min((_disproof_score(model, node, child) for child in node.children), default=INFINITY)
    if isinstance(phi, And):
        return model.agg_conj(conjunction_inputs(phi, Polarity.PROOF, proof_numbers)), disproof
    if isinstance(phi, Box):
        return model.agg_box(phi.agent, proof_numbers), disproof
    raise SearchError(f"Atom node {node!r} cannot be internal")


def select_child(model: CostModel, node: SearchNode) -> SearchNode:
    """Child minimizing the aggregated mdn; the earliest child wins ties."""
    if isinstance(node.formula, Not):
        return node.children[0]
    scores = [_disproof_score(model, node, child) for child in node.children]
    best = min(range(len(scores)), key=scores.__getitem__)
    return node.children[best]


def extend(arena: GameArena, model: CostModel, leaf: SearchNode) -> None:
    """
    Expands an unsolved leaf.

    An atom becomes terminal. Other formulas get one fresh child per
    sub-goal: the negated formula, each distinct conjunct, or the box body at
    each successor state in successor order.
    """
    q, phi = leaf.label
    try:
        if isinstance(phi, Atom):
            leaf.terminal_info = info_term(model, arena, leaf.label)
            leaf.kind = NodeKind.TERMINAL
            return
        if isinstance(phi, Not):
            labels = [(q, phi.body)]
        elif isinstance(phi, And):
            labels = [(q, phi.left)] if phi.shared else [(q, phi.left), (q, phi.right)]
        elif isinstance(phi, Box):
            labels = [(nxt, phi.body) for nxt in arena.successors(q, phi.agent)]
        else:
            raise SearchError(f"Not a formula: {phi!r}")
    except ArenaError as e:
        raise SearchError(f"Arena query failed while expanding ({q}, {format_formula(phi)}): {e}") from e
    leaf.children = [SearchNode(label, init_leaf(model, label), parent=leaf) for label in labels]
    leaf.kind = NodeKind.INTERNAL


def backpropagate(model: CostModel, node: SearchNode) -> SearchNode:
    """
    Refreshes effort numbers from `node` upwards.

    Stops at the first node whose numbers did not change, or at the root, and
    returns it; the next descent starts there since nothing above it moved.
    """
    while True:
        new_info = update_node(model, node)
        if new_info == node.info:
            return node
        node.mpn, node.mdn = new_info
        if node.parent is None:
            return node
        node = node.parent


class MinimalProofSearch:
    """
    Runs minimal proof search over one arena with one cost model.

    The arena and model are shared read-only; every call to solve builds its
    own tree, so one instance may serve several searches in turn.
    """

    def __init__(
        self,
        arena: GameArena,
        model: CostModel,
        selector: Selector = select_child,
        snapshot_hook: Optional[SnapshotHook] = None,
    ):
        """
        Parameters:
        arena (GameArena): The arena to query.
        model (CostModel): Cost model defining minimality.
        selector (callable): Child selection policy; replaced only by tests.
        snapshot_hook (callable, optional): Called as hook(root, iteration)
            after every iteration.
        """
        self.arena = arena
        self.model = model
        self.selector = selector
        self.snapshot_hook = snapshot_hook

    def solve(self, q: StateId, phi: Formula) -> SearchResult:
        self.arena.check_state(q)
        started = time.perf_counter()
        root = SearchNode((q, phi), init_leaf(self.model, (q, phi)))
        node = root
        expansions = iterations = 0
        while not root.solved:
            while node.kind is NodeKind.INTERNAL:
                child = self.selector(self.model, node)
                if child.solved:
                    raise SearchError(f"Selection entered solved node {child!r}")
                node = child
            leaf = node
            extend(self.arena, self.model, leaf)
            expansions += 1
            node = backpropagate(self.model, leaf)
            iterations += 1
            logger.debug(
                "iteration=%d leaf=(%s, %s) root=(%s, %s)",
                iterations, leaf.state, format_formula(leaf.formula),
                format_cost(root.mpn), format_cost(root.mdn),
            )
            if self.snapshot_hook is not None:
                self.snapshot_hook(root, iterations)

        verdict = Verdict.PROVED if root.proved else Verdict.DISPROVED
        result = SearchResult(root, verdict, expansions, iterations, time.perf_counter() - started)
        logger.info(
            "Solved (%s, %s): %s with cost %s after %d expansions in %.4fs",
            q, format_formula(phi), verdict.value, format_cost(result.cost), expansions, result.elapsed,
        )
        return result


def mps_solve(
    arena: GameArena,
    q: StateId,
    phi: Formula,
    model: CostModel,
    selector: Selector = select_child,
    snapshot_hook: Optional[SnapshotHook] = None,
) -> SearchResult:
    """
    Decides whether q satisfies phi and finds a (dis)proof of minimal cost.

    Returns:
    SearchResult: The solved tree, the verdict and search statistics.

    Raises:
    ArenaError: If q is not a state of the arena.
    SearchError: If an arena query fails during the search.
    """
    return MinimalProofSearch(arena, model, selector, snapshot_hook).solve(q, phi)


def exploration_tree_size(arena: GameArena, q: StateId, phi: Formula) -> int:
    """Number of nodes of the fully expanded exploration tree of (q, phi)."""
    if isinstance(phi, Atom):
        return 1
    if isinstance(phi, Not):
        return 1 + exploration_tree_size(arena, q, phi.body)
    if isinstance(phi, And):
        if phi.shared:
            return 1 + exploration_tree_size(arena, q, phi.left)
        return 1 + exploration_tree_size(arena, q, phi.left) + exploration_tree_size(arena, q, phi.right)
    if isinstance(phi, Box):
        return 1 + sum(exploration_tree_size(arena, nxt, phi.body) for nxt in arena.successors(q, phi.agent))
    raise TypeError(f"Not a formula: {phi!r}")
