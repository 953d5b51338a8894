"""
Game arenas: atom-labelled states with agent-labelled transitions.

An arena answers two questions about a state: which atoms label it, and which
states an agent can move to from it. Explicit arenas keep one directed graph
per agent; programmatic arenas (board games and the like) implement the same
interface and compute successors on demand.
"""
import logging
from abc import ABC, abstractmethod
from collections import deque
from typing import Dict, FrozenSet, Hashable, Iterable, List, Sequence, Set, Tuple

import networkx as nx

logger = logging.getLogger(__name__)

AtomId = str
AgentId = str
StateId = Hashable


class ArenaError(ValueError):
    """Raised for unknown states, agents or atoms and for inconsistent arena definitions."""


class ArenaSyntaxError(ArenaError):
    """Raised when an arena document cannot be read at all."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class GameArena(ABC):
    """
    Interface shared by explicit and programmatic arenas.

    Implementations must be immutable once built, so that concurrent searches
    can query the same arena. Successor sequences are deduplicated and come in
    a fixed order, which makes searches reproducible.
    """

    @property
    @abstractmethod
    def atoms(self) -> Tuple[AtomId, ...]:
        """Atoms of the arena, in declaration order."""

    @property
    @abstractmethod
    def agents(self) -> Tuple[AgentId, ...]:
        """Agents of the arena, in declaration order."""

    @abstractmethod
    def has_state(self, q: StateId) -> bool:
        """Whether q is a valid state of this arena."""

    @abstractmethod
    def successors(self, q: StateId, a: AgentId) -> Tuple[StateId, ...]:
        """
        States agent a can move to from q.

        Parameters:
        q (StateId): A state of the arena.
        a (AgentId): One of the arena's agents.

        Returns:
        tuple: The successors, without duplicates, in a deterministic order.
        Empty when the agent has no move.

        Raises:
        ArenaError: If q or a is unknown.
        """

    @abstractmethod
    def labels(self, q: StateId) -> FrozenSet[AtomId]:
        """Atoms holding in q. Raises ArenaError for an unknown state."""

    def check_state(self, q: StateId) -> None:
        if not self.has_state(q):
            raise ArenaError(f"Unknown state '{q}'.")

    def check_agent(self, a: AgentId) -> None:
        if a not in self.agents:
            raise ArenaError(f"Unknown agent '{a}'.")

    def states_within(self, q: StateId, depth: int) -> Dict[StateId, int]:
        """
        Breadth-first distances from q over every agent's moves, up to `depth`.

        Returns:
        dict: Maps each state reachable in at most `depth` moves to its distance.
        """
        self.check_state(q)
        distances = {q: 0}
        frontier = deque([q])
        while frontier:
            state = frontier.popleft()
            if distances[state] == depth:
                continue
            for agent in self.agents:
                for nxt in self.successors(state, agent):
                    if nxt not in distances:
                        distances[nxt] = distances[state] + 1
                        frontier.append(nxt)
        return distances


class ExplicitArena(GameArena):
    """
    An arena whose states and transitions are all listed up front.

    Each agent gets its own networkx DiGraph over the full state set. A
    DiGraph keeps successors in edge insertion order and ignores repeated
    edges, which gives exactly the set-with-declaration-order semantics the
    search relies on.
    """

    def __init__(
        self,
        atoms: Iterable[AtomId],
        agents: Iterable[AgentId],
        states: Sequence[Tuple[StateId, Iterable[AtomId]]],
        transitions: Iterable[Tuple[StateId, AgentId, StateId]],
    ):
        """
        Builds the arena and validates it.

        Parameters:
        atoms: Declared atoms.
        agents: Declared agents.
        states: (state id, labels) pairs in declaration order.
        transitions: (from, agent, to) triples in declaration order.

        Raises:
        ArenaError: If a set the arena needs is empty, a state is declared
        twice, or a label or transition refers to an undeclared name.
        """
        self._atoms = tuple(dict.fromkeys(atoms))
        self._agents = tuple(dict.fromkeys(agents))
        if not self._agents:
            raise ArenaError("An arena needs at least one agent.")
        if not self._atoms:
            raise ArenaError("An arena needs at least one atom.")

        atom_set = set(self._atoms)
        self._labels: Dict[StateId, FrozenSet[AtomId]] = {}
        for state, state_labels in states:
            if state in self._labels:
                raise ArenaError(f"State '{state}' is declared twice.")
            state_labels = frozenset(state_labels)
            undeclared = sorted(state_labels - atom_set)
            if undeclared:
                raise ArenaError(f"State '{state}' uses undeclared atom '{undeclared[0]}'.")
            self._labels[state] = state_labels

        self._moves: Dict[AgentId, nx.DiGraph] = {}
        for agent in self._agents:
            graph = nx.DiGraph()
            graph.add_nodes_from(self._labels)
            self._moves[agent] = graph

        for source, agent, target in transitions:
            if agent not in self._moves:
                raise ArenaError(f"Transition {source} -> {target} uses undeclared agent '{agent}'.")
            for state in (source, target):
                if state not in self._labels:
                    raise ArenaError(f"Transition {source} -{agent}-> {target} uses undeclared state '{state}'.")
            self._moves[agent].add_edge(source, target)

        logger.debug(
            "Built explicit arena with %d states, %d agents, %d atoms",
            len(self._labels), len(self._agents), len(self._atoms),
        )

    @property
    def atoms(self) -> Tuple[AtomId, ...]:
        return self._atoms

    @property
    def agents(self) -> Tuple[AgentId, ...]:
        return self._agents

    @property
    def states(self) -> Tuple[StateId, ...]:
        return tuple(self._labels)

    def has_state(self, q: StateId) -> bool:
        try:
            return q in self._labels
        except TypeError:
            return False

    def successors(self, q: StateId, a: AgentId) -> Tuple[StateId, ...]:
        self.check_state(q)
        self.check_agent(a)
        return tuple(self._moves[a].successors(q))

    def labels(self, q: StateId) -> FrozenSet[AtomId]:
        self.check_state(q)
        return self._labels[q]

    def transitions(self) -> List[Tuple[StateId, AgentId, StateId]]:
        """All transitions, grouped by source state, then agent, then successor order."""
        return [
            (state, agent, target)
            for state in self._labels
            for agent in self._agents
            for target in self._moves[agent].successors(state)
        ]

    def graph(self) -> nx.MultiDiGraph:
        """Union of all agents' moves; edges are keyed by agent."""
        union = nx.MultiDiGraph()
        for state, state_labels in self._labels.items():
            union.add_node(state, labels=sorted(state_labels, key=self._atoms.index))
        for source, agent, target in self.transitions():
            union.add_edge(source, target, key=agent, agent=agent)
        return union

    def states_within(self, q: StateId, depth: int) -> Dict[StateId, int]:
        self.check_state(q)
        return dict(nx.single_source_shortest_path_length(self.graph(), q, cutoff=depth))

    def __eq__(self, other):
        if not isinstance(other, ExplicitArena):
            return NotImplemented
        return (
            self._atoms == other._atoms
            and self._agents == other._agents
            and list(self._labels.items()) == list(other._labels.items())
            and self.transitions() == other.transitions()
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"ExplicitArena(states={len(self._labels)}, agents={list(self._agents)}, "
            f"atoms={list(self._atoms)})"
        )


class QueryRecorder(GameArena):
    """
    Forwards every query to an inner arena and remembers which states were asked about.

    Holds mutable bookkeeping, so an instance serves a single search at a time.
    """

    def __init__(self, inner: GameArena):
        self.inner = inner
        self.queried: Set[StateId] = set()

    @property
    def atoms(self) -> Tuple[AtomId, ...]:
        return self.inner.atoms

    @property
    def agents(self) -> Tuple[AgentId, ...]:
        return self.inner.agents

    def has_state(self, q: StateId) -> bool:
        return self.inner.has_state(q)

    def successors(self, q: StateId, a: AgentId) -> Tuple[StateId, ...]:
        self.queried.add(q)
        return self.inner.successors(q, a)

    def labels(self, q: StateId) -> FrozenSet[AtomId]:
        self.queried.add(q)
        return self.inner.labels(q)


def successors(arena: GameArena, q: StateId, a: AgentId) -> Tuple[StateId, ...]:
    return arena.successors(q, a)


def labels(arena: GameArena, q: StateId) -> FrozenSet[AtomId]:
    return arena.labels(q)
