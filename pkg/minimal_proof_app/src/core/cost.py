"""
Costs of proofs and disproofs.

A cost model is a base cost per atom plus two aggregators, one for
conjunctions and one per agent for boxes. Costs are floats where math.inf
stands for "no such (dis)proof". The aggregators must be increasing,
absorb infinity and keep finite inputs finite; `aggregator_violations`
checks these axioms on a sample.
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from functools import partial
from typing import TYPE_CHECKING, Callable, Dict, List, Mapping, Optional, Sequence

from .arena import AgentId, AtomId
from .formula import And, Atom, Box, Formula, Not

if TYPE_CHECKING:
    from .proof import ProofTree

logger = logging.getLogger(__name__)

INFINITY = math.inf
ExtCost = float


class CostConfigError(ValueError):
    """Raised for malformed cost model configuration."""


class Polarity(enum.Enum):
    PROOF = "proof"
    DISPROOF = "disproof"

    def flipped(self) -> "Polarity":
        return Polarity.DISPROOF if self is Polarity.PROOF else Polarity.PROOF


@dataclass(frozen=True)
class CostModel:
    """
    Base cost k and aggregators A_and and A_box.

    Aggregators receive a sequence but must not depend on its order.
    """
    name: str
    base_cost: Callable[[AtomId], ExtCost]
    agg_conj: Callable[[Sequence[ExtCost]], ExtCost]
    agg_box: Callable[[AgentId, Sequence[ExtCost]], ExtCost]
    settings: Dict[str, Dict[str, float]] = field(default_factory=dict, compare=False)


def _constant(value: float, _name: str) -> float:
    return value


def _max(costs: Sequence[ExtCost]) -> ExtCost:
    return max(costs, default=0.0)


def _sum(costs: Sequence[ExtCost]) -> ExtCost:
    return float(sum(costs))


def _one_plus_max(_agent: AgentId, costs: Sequence[ExtCost]) -> ExtCost:
    return 1.0 + max(costs, default=0.0)


def _box_sum(_agent: AgentId, costs: Sequence[ExtCost]) -> ExtCost:
    return float(sum(costs))


def _table_cost(table: Mapping[str, float], name: str) -> float:
    return float(table.get(name, 1.0))


def _weighted_box(box_costs: Mapping[AgentId, float], agent: AgentId, costs: Sequence[ExtCost]) -> ExtCost:
    return float(box_costs.get(agent, 1.0)) + float(sum(costs))


def depth_model() -> CostModel:
    """Nesting depth of boxes: k = 0, A_and = max, A_box(a, X) = 1 + max X."""
    return CostModel("depth", partial(_constant, 0.0), _max, _one_plus_max)


def query_count_model() -> CostModel:
    """Number of atomic queries: k = 1, both aggregators sum."""
    return CostModel("query_count", partial(_constant, 1.0), _sum, _box_sum)


def weighted_model(
    atom_costs: Optional[Mapping[AtomId, float]] = None,
    box_costs: Optional[Mapping[AgentId, float]] = None,
) -> CostModel:
    """
    Priced interactions: k(p) per atom, A_and = sum, A_box(a, X) = k_box(a) + sum X.

    Unlisted atoms and agents cost 1.
    """
    atom_costs = dict(atom_costs or {})
    box_costs = dict(box_costs or {})
    for kind, table in (("atom", atom_costs), ("box", box_costs)):
        for name, value in table.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise CostConfigError(f"Cost of {kind} '{name}' must be a number, got {value!r}.")
            if not math.isfinite(value) or value < 0:
                raise CostConfigError(f"Cost of {kind} '{name}' must be finite and non-negative, got {value}.")
    return CostModel(
        "weighted",
        partial(_table_cost, atom_costs),
        _sum,
        partial(_weighted_box, box_costs),
        settings={"atom_costs": atom_costs, "box_costs": box_costs},
    )


DEPTH = depth_model()
QUERY_COUNT = query_count_model()
WEIGHTED = weighted_model()

BUILTIN_MODELS = {model.name: model for model in (DEPTH, QUERY_COUNT, WEIGHTED)}


def load_cost_model(config: Mapping) -> CostModel:
    """
    Builds a cost model from a configuration mapping.

    Parameters:
    config (Mapping): {"model": "depth" | "query_count" | "weighted"} plus, for
        weighted, optional "atom_costs" and "box_costs" mappings.

    Returns:
    CostModel: The configured model.

    Raises:
    CostConfigError: If the model name is unknown or a table is malformed.
    """
    if not isinstance(config, Mapping):
        raise CostConfigError("Cost configuration must be a mapping.")
    name = config.get("model")
    if name not in BUILTIN_MODELS:
        raise CostConfigError(f"Unknown cost model {name!r}; expected one of {', '.join(BUILTIN_MODELS)}.")
    if name != "weighted":
        extra = sorted(set(config) - {"model"})
        if extra:
            raise CostConfigError(f"Cost model '{name}' takes no settings, got {', '.join(extra)}.")
        return BUILTIN_MODELS[name]
    tables = {}
    for key in ("atom_costs", "box_costs"):
        table = config.get(key, {})
        if not isinstance(table, Mapping):
            raise CostConfigError(f"'{key}' must be a mapping from names to costs.")
        tables[key] = table
    return weighted_model(tables["atom_costs"], tables["box_costs"])


def format_cost(value: ExtCost) -> str:
    """Canonical text of a cost: 'inf', integers without a fractional part, otherwise repr."""
    if value == INFINITY:
        return "inf"
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def describe_weights(model: CostModel) -> str:
    """Explicit weights of a model as 'atom p=2, q=1; box a=3', or '' when it has none."""
    parts = []
    for kind, key in (("atom", "atom_costs"), ("box", "box_costs")):
        table = model.settings.get(key, {})
        if table:
            parts.append(f"{kind} " + ", ".join(f"{name}={format_cost(table[name])}" for name in sorted(table)))
    return "; ".join(parts)


def heuristic_proof(model: CostModel, phi: Formula) -> ExtCost:
    """I(phi): admissible lower bound on the cost of any proof of phi."""
    if isinstance(phi, Atom):
        return model.base_cost(phi.name)
    if isinstance(phi, Not):
        return heuristic_disproof(model, phi.body)
    if isinstance(phi, And):
        return model.agg_conj([heuristic_proof(model, phi.left), heuristic_proof(model, phi.right)])
    if isinstance(phi, Box):
        return model.agg_box(phi.agent, [])
    raise TypeError(f"Not a formula: {phi!r}")


def heuristic_disproof(model: CostModel, phi: Formula) -> ExtCost:
    """J(phi): admissible lower bound on the cost of any disproof of phi."""
    if isinstance(phi, Atom):
        return model.base_cost(phi.name)
    if isinstance(phi, Not):
        return heuristic_proof(model, phi.body)
    if isinstance(phi, And):
        return min(
            model.agg_conj([heuristic_disproof(model, phi.left)]),
            model.agg_conj([heuristic_disproof(model, phi.right)]),
        )
    if isinstance(phi, Box):
        return model.agg_box(phi.agent, [heuristic_disproof(model, phi.body)])
    raise TypeError(f"Not a formula: {phi!r}")


def conjunction_inputs(phi: And, polarity: Polarity, child_costs: List[ExtCost]) -> List[ExtCost]:
    """
    Multiset a conjunction aggregates over.

    A proof of (phi & phi) keeps a single child for both conjuncts; that child
    is counted once per conjunct.
    """
    if polarity is Polarity.PROOF and phi.shared and len(child_costs) == 1:
        return child_costs * 2
    return child_costs


def proof_cost(model: CostModel, tree: "ProofTree") -> ExtCost:
    """
    K(tree): cost of a proof or disproof, computed bottom-up.

    Atoms cost k(p), negations cost their child, conjunctions and boxes
    aggregate their children's costs.
    """
    phi = tree.formula
    if isinstance(phi, Atom):
        return model.base_cost(phi.name)
    child_costs = [proof_cost(model, child) for child in tree.children]
    if isinstance(phi, Not):
        return child_costs[0] if child_costs else INFINITY
    if isinstance(phi, And):
        return model.agg_conj(conjunction_inputs(phi, tree.polarity, child_costs))
    if isinstance(phi, Box):
        return model.agg_box(phi.agent, child_costs)
    raise TypeError(f"Not a formula: {phi!r}")


def aggregator_violations(
    model: CostModel,
    agent: AgentId,
    multiset: Sequence[ExtCost],
    x: ExtCost,
    y: ExtCost,
) -> List[str]:
    """
    Checks the aggregator axioms of `model` on one sample.

    Parameters:
    model (CostModel): Model under test.
    agent (AgentId): Agent passed to the box aggregator.
    multiset (Sequence): The base multiset X.
    x, y: Extra costs; the caller orders them so that x <= y.

    Returns:
    list: Names of violated axioms, empty when all hold.
    """
    violations = []
    aggregators = {
        "conjunction": model.agg_conj,
        "box": partial(model.agg_box, agent),
    }
    base = list(multiset)
    for kind, aggregate in aggregators.items():
        plain = aggregate(base)
        with_x = aggregate([x] + base)
        with_y = aggregate([y] + base)
        if not plain <= with_x <= with_y:
            violations.append(f"{kind}: increasing")
        if aggregate([INFINITY]) != INFINITY:
            violations.append(f"{kind}: infinity absorption")
        if plain < INFINITY and x < INFINITY and with_x == INFINITY:
            violations.append(f"{kind}: finiteness preservation")
        if aggregate(list(reversed(base))) != plain:
            violations.append(f"{kind}: order sensitive")
    return violations
