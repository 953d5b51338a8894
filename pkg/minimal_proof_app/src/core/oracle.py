"""
Brute-force ground truth for small instances.

`naive_model_check` evaluates the satisfaction relation directly and
`min_cost` computes the cost of minimal proofs and disproofs by exhaustive
recursion. `enumerate_proofs` lists every (dis)proof up to a node bound so
the two can be cross-checked.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .arena import GameArena, StateId
from .cost import INFINITY, CostModel, ExtCost, Polarity
from .formula import And, Atom, Box, Formula, Not
from .proof import ProofTree

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleResult:
    holds: bool
    min_proof_cost: ExtCost
    min_disproof_cost: ExtCost


@dataclass
class ProofEnumeration:
    proofs: List[ProofTree] = field(default_factory=list)
    disproofs: List[ProofTree] = field(default_factory=list)
    truncated: bool = False


def naive_model_check(arena: GameArena, q: StateId, phi: Formula) -> bool:
    if isinstance(phi, Atom):
        return phi.name in arena.labels(q)
    if isinstance(phi, Not):
        return not naive_model_check(arena, q, phi.body)
    if isinstance(phi, And):
        return naive_model_check(arena, q, phi.left) and naive_model_check(arena, q, phi.right)
    if isinstance(phi, Box):
        return all(naive_model_check(arena, nxt, phi.body) for nxt in arena.successors(q, phi.agent))
    raise TypeError(f"Not a formula: {phi!r}")


class MinimalCostTable:
    """
    Memoized minimal proof and disproof costs per (state, formula).

    Because aggregators are increasing, replacing any sub-(dis)proof by a
    cheaper one never makes the whole more expensive. A minimal proof is
    therefore built from minimal proofs of its parts, and the recursion
    below only needs the minimal cost of each part:

        MinP(q, p)      = k(p) if p holds else inf
        MinP(q, !f)     = MinD(q, f)
        MinP(q, f & g)  = A_and({MinP(q, f), MinP(q, g)})
        MinP(q, [a]f)   = A_box(a, {MinP(q', f) for each successor q'})
        MinD(q, p)      = k(p) if p does not hold else inf
        MinD(q, !f)     = MinP(q, f)
        MinD(q, f & g)  = min(A_and({MinD(q, f)}), A_and({MinD(q, g)}))
        MinD(q, [a]f)   = min over successors q' of A_box(a, {MinD(q', f)})
    """

    def __init__(self, arena: GameArena, model: CostModel):
        self.arena = arena
        self.model = model
        self._proof: Dict[Tuple[StateId, Formula], ExtCost] = {}
        self._disproof: Dict[Tuple[StateId, Formula], ExtCost] = {}

    def min_proof(self, q: StateId, phi: Formula) -> ExtCost:
        key = (q, phi)
        if key not in self._proof:
            self._proof[key] = self._compute(q, phi, Polarity.PROOF)
        return self._proof[key]

    def min_disproof(self, q: StateId, phi: Formula) -> ExtCost:
        key = (q, phi)
        if key not in self._disproof:
            self._disproof[key] = self._compute(q, phi, Polarity.DISPROOF)
        return self._disproof[key]

    def min_cost(self, q: StateId, phi: Formula, polarity: Polarity) -> ExtCost:
        if polarity is Polarity.PROOF:
            return self.min_proof(q, phi)
        return self.min_disproof(q, phi)

    def _compute(self, q: StateId, phi: Formula, polarity: Polarity) -> ExtCost:
        model = self.model
        if isinstance(phi, Atom):
            holds = phi.name in self.arena.labels(q)
            return model.base_cost(phi.name) if holds == (polarity is Polarity.PROOF) else INFINITY
        if isinstance(phi, Not):
            return self.min_cost(q, phi.body, polarity.flipped())
        if isinstance(phi, And):
            if polarity is Polarity.PROOF:
                return model.agg_conj([self.min_proof(q, phi.left), self.min_proof(q, phi.right)])
            return min(
                model.agg_conj([self.min_disproof(q, phi.left)]),
                model.agg_conj([self.min_disproof(q, phi.right)]),
            )
        if isinstance(phi, Box):
            moves = self.arena.successors(q, phi.agent)
            if polarity is Polarity.PROOF:
                return model.agg_box(phi.agent, [self.min_proof(nxt, phi.body) for nxt in moves])
            return min((model.agg_box(phi.agent, [self.min_disproof(nxt, phi.body)]) for nxt in moves), default=INFINITY)
        raise TypeError(f"Not a formula: {phi!r}")

    def result(self, q: StateId, phi: Formula) -> OracleResult:
        return OracleResult(
            holds=naive_model_check(self.arena, q, phi),
            min_proof_cost=self.min_proof(q, phi),
            min_disproof_cost=self.min_disproof(q, phi),
        )


def min_cost(arena: GameArena, q: StateId, phi: Formula, model: CostModel) -> OracleResult:
    """
    Minimal proof and disproof costs of (q, phi) by exhaustive recursion.

    Returns:
    OracleResult: Whether phi holds in q, and the two minimal costs (inf when
    no such (dis)proof exists).
    """
    arena.check_state(q)
    return MinimalCostTable(arena, model).result(q, phi)


class _Enumerator:
    def __init__(self, arena: GameArena):
        self.arena = arena
        self.truncated = False

    def exists(self, q: StateId, phi: Formula, polarity: Polarity) -> bool:
        return naive_model_check(self.arena, q, phi) == (polarity is Polarity.PROOF)

    def trees(self, q: StateId, phi: Formula, polarity: Polarity, limit: int) -> List[Tuple[ProofTree, int]]:
        """All (dis)proofs of (q, phi) with at most `limit` nodes, with their node counts."""
        if limit < 1:
            if self.exists(q, phi, polarity):
                self.truncated = True
            return []
        if isinstance(phi, Atom):
            if self.exists(q, phi, polarity):
                return [(ProofTree(q, phi, polarity), 1)]
            return []
        if isinstance(phi, Not):
            return [
                (ProofTree(q, phi, polarity, (child,)), count + 1)
                for child, count in self.trees(q, phi.body, polarity.flipped(), limit - 1)
            ]
        if isinstance(phi, And):
            if polarity is Polarity.DISPROOF:
                conjuncts = [phi.left] if phi.shared else [phi.left, phi.right]
                return [
                    (ProofTree(q, phi, polarity, (child,)), count + 1)
                    for conjunct in conjuncts
                    for child, count in self.trees(q, conjunct, polarity, limit - 1)
                ]
            if phi.shared:
                return [
                    (ProofTree(q, phi, polarity, (child,)), count + 1)
                    for child, count in self.trees(q, phi.left, polarity, limit - 1)
                ]
            return [
                (ProofTree(q, phi, polarity, children), count + 1)
                for children, count in self.products([(q, phi.left), (q, phi.right)], polarity, limit - 1)
            ]
        if isinstance(phi, Box):
            moves = self.arena.successors(q, phi.agent)
            if polarity is Polarity.DISPROOF:
                return [
                    (ProofTree(q, phi, polarity, (child,)), count + 1)
                    for nxt in moves
                    for child, count in self.trees(nxt, phi.body, polarity, limit - 1)
                ]
            return [
                (ProofTree(q, phi, polarity, children), count + 1)
                for children, count in self.products([(nxt, phi.body) for nxt in moves], polarity, limit - 1)
            ]
        raise TypeError(f"Not a formula: {phi!r}")

    def products(self, labels, polarity: Polarity, limit: int) -> List[Tuple[Tuple[ProofTree, ...], int]]:
        """Every combination of one (dis)proof per label, within a shared node bound."""
        if not labels:
            return [((), 0)]
        (q, phi), rest = labels[0], labels[1:]
        combos = []
        for head, used in self.trees(q, phi, polarity, limit):
            for tail, more in self.products(rest, polarity, limit - used):
                combos.append(((head,) + tail, used + more))
        return combos


def enumerate_proofs(arena: GameArena, q: StateId, phi: Formula, bound: int) -> ProofEnumeration:
    """
    Lists all structurally distinct proofs and disproofs of (q, phi) with at most `bound` nodes.

    Returns:
    ProofEnumeration: The proofs, the disproofs, and a truncation flag set
    when some (dis)proof was left out because of the bound.
    """
    arena.check_state(q)
    enumerator = _Enumerator(arena)
    enumeration = ProofEnumeration()
    enumeration.proofs = [tree for tree, _ in enumerator.trees(q, phi, Polarity.PROOF, bound)]
    enumeration.disproofs = [tree for tree, _ in enumerator.trees(q, phi, Polarity.DISPROOF, bound)]
    enumeration.truncated = enumerator.truncated
    if enumeration.truncated:
        logger.info("Proof enumeration of (%s, %s) truncated at %d nodes", q, phi, bound)
    return enumeration


def all_labels(arena: GameArena, q: StateId, phi: Formula) -> List[Tuple[StateId, Formula]]:
    """Every (state, subformula) pair of the full exploration tree, once each."""
    seen = {}
    stack = [(q, phi)]
    while stack:
        label = stack.pop()
        if label in seen:
            continue
        seen[label] = None
        state, formula = label
        if isinstance(formula, Not):
            stack.append((state, formula.body))
        elif isinstance(formula, And):
            stack.extend([(state, formula.right), (state, formula.left)])
        elif isinstance(formula, Box):
            stack.extend((nxt, formula.body) for nxt in reversed(arena.successors(state, formula.agent)))
    return list(seen)

