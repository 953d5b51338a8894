"""
Programmatic arenas for perfect information games, and formulas about them.

A programmatic arena computes successors on demand from a serialized
position, so the search only ever touches positions within the modal depth
of the formula.
"""
import logging
from functools import lru_cache
from typing import FrozenSet, Tuple

from .arena import AgentId, AtomId, GameArena, StateId
from .formula import And, Atom, Box, Formula, Not, diamond, disjunction

logger = logging.getLogger(__name__)

LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),
    (0, 3, 6), (1, 4, 7), (2, 5, 8),
    (0, 4, 8), (2, 4, 6),
)


@lru_cache(maxsize=None)
def _winner(board: str) -> str:
    for a, b, c in LINES:
        if board[a] != "." and board[a] == board[b] == board[c]:
            return board[a]
    return ""


class TicTacToeArena(GameArena):
    """
    Noughts and crosses as a game arena.

    A state is the 9-character board (rows top to bottom, '.' for empty)
    followed by '|' and the side to move, e.g. "xx.oo....|x". Agents are
    'x' and 'o'; an agent has no move when it is not its turn or the game is
    over. Atoms: x_wins, o_wins, full.
    """

    AGENTS = ("x", "o")
    ATOMS = ("x_wins", "o_wins", "full")

    @property
    def atoms(self) -> Tuple[AtomId, ...]:
        return self.ATOMS

    @property
    def agents(self) -> Tuple[AgentId, ...]:
        return self.AGENTS

    @staticmethod
    def position(board: str) -> str:
        """State id of a board, with the side to move derived from the piece counts."""
        mover = "x" if board.count("x") == board.count("o") else "o"
        return f"{board}|{mover}"

    @classmethod
    def initial(cls) -> str:
        return cls.position("." * 9)

    def has_state(self, q: StateId) -> bool:
        if not isinstance(q, str) or len(q) != 11 or q[9] != "|":
            return False
        board, mover = q[:9], q[10]
        if set(board) - {"x", "o", "."}:
            return False
        crosses, noughts = board.count("x"), board.count("o")
        if crosses - noughts not in (0, 1):
            return False
        return mover == ("x" if crosses == noughts else "o")

    def labels(self, q: StateId) -> FrozenSet[AtomId]:
        self.check_state(q)
        board = q[:9]
        found = set()
        winner = _winner(board)
        if winner:
            found.add(f"{winner}_wins")
        if "." not in board:
            found.add("full")
        return frozenset(found)

    def successors(self, q: StateId, a: AgentId) -> Tuple[StateId, ...]:
        self.check_state(q)
        self.check_agent(a)
        board, mover = q[:9], q[10]
        if a != mover or _winner(board) or "." not in board:
            return ()
        return tuple(
            self.position(board[:cell] + a + board[cell + 1:])
            for cell in range(9)
            if board[cell] == "."
        )


def can_move(agent: AgentId, atom: AtomId) -> Formula:
    """<agent>(atom | !atom): the agent has at least one move."""
    return diamond(agent, disjunction(Atom(atom), Not(Atom(atom))))


def forced_win(attacker: AgentId, defender: AgentId, goal: AtomId, moves: int) -> Formula:
    """
    The attacker can reach `goal` within `moves` of its own moves, whatever the defender does.

    W(0) = goal
    W(n) = goal | <attacker>(goal | (defender can move & [defender] W(n-1)))

    The defender must have a move, otherwise a blocked position would count
    as a win through an empty box.
    """
    if moves < 0:
        raise ValueError("moves must be non-negative")
    win = Atom(goal)
    target: Formula = win
    for _ in range(moves):
        reply = And(can_move(defender, goal), Box(defender, target))
        target = disjunction(win, diamond(attacker, disjunction(win, reply)))
    logger.debug("Built forced win formula for %s within %d moves", attacker, moves)
    return target


GAMES = {"tictactoe": TicTacToeArena}
