"""
Formulas of multi-agent modal logic K: abstract syntax, parser and printer.

Only four constructors exist: atoms, negation, conjunction and one box per
agent. Disjunction and diamond are rewritten into them while parsing:

    p | q   ->  !(!p & !q)
    <a>p    ->  ![a]!p
"""
import logging
import re
from dataclasses import dataclass
from typing import List, NamedTuple, Optional

from .arena import AgentId, AtomId, GameArena

logger = logging.getLogger(__name__)


class FormulaSyntaxError(ValueError):
    """Raised when formula text does not follow the grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownSymbolError(ValueError):
    """Raised when an atom or agent name does not exist in the arena."""

    def __init__(self, kind: str, name: str, position: int):
        super().__init__(f"Unknown {kind} '{name}' at position {position}")
        self.kind = kind
        self.name = name
        self.position = position


@dataclass(frozen=True)
class Formula:
    """Base class of the formula AST. Equality is structural."""

    @property
    def size(self) -> int:
        return size(self)

    @property
    def modal_depth(self) -> int:
        return modal_depth(self)

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: AtomId


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    @property
    def shared(self) -> bool:
        """Both conjuncts are the same formula, so one child serves both."""
        return self.left == self.right


@dataclass(frozen=True)
class Box(Formula):
    agent: AgentId
    body: Formula


def disjunction(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def diamond(agent: AgentId, body: Formula) -> Formula:
    return Not(Box(agent, Not(body)))


def size(phi: Formula) -> int:
    if isinstance(phi, Atom):
        return 1
    if isinstance(phi, (Not, Box)):
        return 1 + size(phi.body)
    if isinstance(phi, And):
        return 1 + size(phi.left) + size(phi.right)
    raise TypeError(f"Not a formula: {phi!r}")


def modal_depth(phi: Formula) -> int:
    """0 for atoms; negation keeps the depth, conjunction takes the max, a box adds one."""
    if isinstance(phi, Atom):
        return 0
    if isinstance(phi, Not):
        return modal_depth(phi.body)
    if isinstance(phi, And):
        return max(modal_depth(phi.left), modal_depth(phi.right))
    if isinstance(phi, Box):
        return 1 + modal_depth(phi.body)
    raise TypeError(f"Not a formula: {phi!r}")


def format_formula(phi: Formula) -> str:
    """
    Canonical text of a core formula.

    Every conjunction is parenthesized, so parsing the output gives back the
    same tree.
    """
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Not):
        return "!" + format_formula(phi.body)
    if isinstance(phi, And):
        return f"({format_formula(phi.left)} & {format_formula(phi.right)})"
    if isinstance(phi, Box):
        return f"[{phi.agent}]{format_formula(phi.body)}"
    raise TypeError(f"Not a formula: {phi!r}")


class Token(NamedTuple):
    kind: str
    text: str
    position: int


_TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[!&|\[\]<>()]))")


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    while True:
        match = _TOKEN_RE.match(text, position)
        if match is None or match.end() == match.start() or match.lastgroup is None:
            rest = len(text) - len(text[position:].lstrip())
            if rest >= len(text):
                break
            raise FormulaSyntaxError(f"Unexpected character {text[rest]!r}", rest)
        kind = match.lastgroup
        start = match.start(kind)
        value = match.group(kind)
        tokens.append(Token("ident" if kind == "ident" else value, value, start))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class FormulaParser:
    """
    Recursive descent parser for the concrete syntax.

    formula := disj
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := '!' unary | '[' ident ']' unary | '<' ident '>' unary | ident | '(' formula ')'

    Binary operators associate to the left. When an arena is given, atom and
    agent names must exist in it.
    """

    def __init__(self, text: str, arena: Optional[GameArena] = None):
        self.text = text
        self.arena = arena
        self.tokens = tokenize(text)
        self.current = 0

    def peek(self) -> Token:
        return self.tokens[self.current]

    def advance(self) -> Token:
        token = self.tokens[self.current]
        if token.kind != "end":
            self.current += 1
        return token

    def expect(self, kind: str) -> Token:
        token = self.peek()
        if token.kind != kind:
            found = "end of input" if token.kind == "end" else repr(token.text)
            wanted = "identifier" if kind == "ident" else repr(kind)
            raise FormulaSyntaxError(f"Expected {wanted}, found {found}", token.position)
        return self.advance()

    def parse(self) -> Formula:
        try:
            phi = self.disjunction()
        except RecursionError:
            raise FormulaSyntaxError("Formula nested too deeply", self.peek().position) from None
        self.expect("end")
        return phi

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek().kind == "|":
            self.advance()
            left = disjunction(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.peek().kind == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        token = self.peek()
        if token.kind == "!":
            self.advance()
            return Not(self.unary())
        if token.kind == "[":
            self.advance()
            agent = self._agent(self.expect("ident"))
            self.expect("]")
            return Box(agent, self.unary())
        if token.kind == "<":
            self.advance()
            agent = self._agent(self.expect("ident"))
            self.expect(">")
            return diamond(agent, self.unary())
        if token.kind == "(":
            self.advance()
            phi = self.disjunction()
            self.expect(")")
            return phi
        if token.kind == "ident":
            self.advance()
            return Atom(self._atom(token))
        found = "end of input" if token.kind == "end" else repr(token.text)
        raise FormulaSyntaxError(f"Expected a formula, found {found}", token.position)

    def _atom(self, token: Token) -> AtomId:
        if self.arena is not None and token.text not in self.arena.atoms:
            raise UnknownSymbolError("atom", token.text, token.position)
        return token.text

    def _agent(self, token: Token) -> AgentId:
        if self.arena is not None and token.text not in self.arena.agents:
            raise UnknownSymbolError("agent", token.text, token.position)
        return token.text


def parse_formula(text: str, arena: Optional[GameArena] = None) -> Formula:
    """
    Parses formula text into a core formula.

    Parameters:
    text (str): Formula in the concrete syntax.
    arena (GameArena, optional): Arena used to resolve atom and agent names.

    Returns:
    Formula: The desugared formula.

    Raises:
    FormulaSyntaxError: If the text does not follow the grammar or nests
        deeper than the interpreter's recursion limit allows.
    UnknownSymbolError: If a name is not declared in the arena.
    """
    return FormulaParser(text, arena).parse()
