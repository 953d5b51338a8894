"""
Seeded random instances for engine-versus-oracle campaigns.

All randomness comes from the numpy Generator passed in, so a seed fixes the
whole sequence of instances.
"""
import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from src.core.arena import AgentId, AtomId, ExplicitArena, StateId
from src.core.formula import And, Atom, Box, Formula, Not, format_formula
from .loader import dump_arena

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InstanceBounds:
    """Upper bounds for random instances; small enough for exhaustive oracles."""
    max_states: int = 6
    max_agents: int = 2
    max_atoms: int = 3
    max_branching: int = 3
    max_formula_size: int = 8

    def __post_init__(self):
        for name in ("max_states", "max_agents", "max_atoms", "max_formula_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1, got {getattr(self, name)}.")
        if self.max_branching < 0:
            raise ValueError(f"max_branching must be non-negative, got {self.max_branching}.")


@dataclass(frozen=True)
class Instance:
    arena: ExplicitArena
    state: StateId
    formula: Formula

    def to_record(self) -> Dict[str, Any]:
        """JSON-ready replay record: the arena document, the state and the formula text."""
        return {
            "arena": json.loads(dump_arena(self.arena)),
            "state": self.state,
            "formula": format_formula(self.formula),
        }


def random_formula(rng: np.random.Generator, target_size: int, atoms: List[AtomId], agents: List[AgentId]) -> Formula:
    """A core formula of exactly `target_size` constructors over the given names."""
    if target_size <= 1:
        return Atom(atoms[int(rng.integers(len(atoms)))])
    if target_size == 2:
        kind = "not" if rng.random() < 0.5 else "box"
    else:
        kind = ("not", "and", "box")[int(rng.integers(3))]
    if kind == "and":
        left_size = int(rng.integers(1, target_size - 1))
        return And(
            random_formula(rng, left_size, atoms, agents),
            random_formula(rng, target_size - 1 - left_size, atoms, agents),
        )
    body = random_formula(rng, target_size - 1, atoms, agents)
    if kind == "not":
        return Not(body)
    return Box(agents[int(rng.integers(len(agents)))], body)


def random_arena(rng: np.random.Generator, bounds: InstanceBounds) -> ExplicitArena:
    n_states = int(rng.integers(1, bounds.max_states + 1))
    n_agents = int(rng.integers(1, bounds.max_agents + 1))
    n_atoms = int(rng.integers(1, bounds.max_atoms + 1))
    atoms = [f"p{i}" for i in range(n_atoms)]
    agents = [f"a{i}" for i in range(n_agents)]
    states = [f"s{i}" for i in range(n_states)]

    labelled = rng.random((n_states, n_atoms)) < 0.5
    transitions = []
    for i, state in enumerate(states):
        for agent in agents:
            branching = min(int(rng.integers(0, bounds.max_branching + 1)), n_states)
            targets = rng.choice(n_states, size=branching, replace=False)
            transitions.extend((state, agent, states[int(j)]) for j in targets)

    return ExplicitArena(
        atoms=atoms,
        agents=agents,
        states=[(state, [atoms[j] for j in np.flatnonzero(labelled[i])]) for i, state in enumerate(states)],
        transitions=transitions,
    )


def random_instance(rng: np.random.Generator, bounds: InstanceBounds = InstanceBounds()) -> Instance:
    """
    Draws an arena, a state of it and a formula over its names.

    Parameters:
    - rng: numpy Generator; the only source of randomness.
    - bounds: Size limits of the arena and the formula.

    Returns:
    Instance: The arena, the root state and the formula.
    """
    arena = random_arena(rng, bounds)
    state = arena.states[int(rng.integers(len(arena.states)))]
    target_size = int(rng.integers(1, bounds.max_formula_size + 1))
    formula = random_formula(rng, target_size, list(arena.atoms), list(arena.agents))
    logger.debug("Drew %r, state %s, formula %s", arena, state, format_formula(formula))
    return Instance(arena, state, formula)
