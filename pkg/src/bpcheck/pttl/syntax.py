"""PTTL formulae: abstract syntax, parser and printer.

Concrete syntax::

    state := true | false | ident | ! state | state & state | state | state
           | state -> state | ( state ) | [ path ] cmp rational
    path  := AX state | EX state | AF state | EF state | AG state | EG state
           | state AU state | state EU state | state AR state | state ER state
    cmp   := < | <= | >= | >

``false``, ``|``, ``->``, AF, EF, AG and EG are expanded while parsing, so the
AST only holds the core connectives.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from ..errors import FormulaSyntaxError


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "State"


@dataclass(frozen=True)
class And:
    left: "State"
    right: "State"


@dataclass(frozen=True)
class AX:
    arg: "State"


@dataclass(frozen=True)
class EX:
    arg: "State"


@dataclass(frozen=True)
class AU:
    left: "State"
    right: "State"


@dataclass(frozen=True)
class EU:
    left: "State"
    right: "State"


@dataclass(frozen=True)
class AR:
    left: "State"
    right: "State"


@dataclass(frozen=True)
class ER:
    left: "State"
    right: "State"


Path = Union[AX, EX, AU, EU, AR, ER]


@dataclass(frozen=True)
class Prob:
    path: Path
    op: str
    bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, "bound", Fraction(self.bound))
        if self.op not in ("<", "<=", ">=", ">"):
            raise ValueError(f"unknown comparison {self.op!r}")
        if not 0 <= self.bound <= 1:
            raise ValueError("probability bound must lie in [0, 1]")


State = Union[TrueF, Atom, Not, And, Prob]

FALSE = Not(TrueF())


def Or(a, b):
    return Not(And(Not(a), Not(b)))


def Implies(a, b):
    return Not(And(a, Not(b)))


def AF(a):
    return AU(TrueF(), a)


def EF(a):
    return EU(TrueF(), a)


def AG(a):
    return AR(FALSE, a)


def EG(a):
    return ER(FALSE, a)


MIRROR = {"<": ">", "<=": ">=", ">=": "<=", ">": "<"}


def subformulas(phi) -> Iterator:
    """Post-order walk over state and path nodes."""
    if isinstance(phi, (Not, AX, EX)):
        yield from subformulas(phi.arg)
    elif isinstance(phi, (And, AU, EU, AR, ER)):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)
    elif isinstance(phi, Prob):
        yield from subformulas(phi.path)
    yield phi


def atoms(phi) -> set[str]:
    return {f.name for f in subformulas(phi) if isinstance(f, Atom)}


def is_qualitative(phi) -> bool:
    return all(f.bound in (0, 1) for f in subformulas(phi) if isinstance(f, Prob))


# -- parser ------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>\d+/\d+|\d*\.\d+|\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><=|>=|->|[<>\[\]()!&|])
""", re.VERBOSE)

_UNARY_PATHS = {"AX": AX, "EX": EX, "AF": AF, "EF": EF, "AG": AG, "EG": EG}
_BINARY_PATHS = {"AU": AU, "EU": EU, "AR": AR, "ER": ER}
KEYWORDS = {"true", "false"} | set(_UNARY_PATHS) | set(_BINARY_PATHS)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None, kind=None):
        tok = self.tokens[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[0] != "end" else "end of input"
            raise FormulaSyntaxError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def state(self):
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.take("->")
            return Implies(left, self.state())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.peek()[1] == "|":
            self.take("|")
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.peek()[1] == "&":
            self.take("&")
            left = And(left, self.unary())
        return left

    def unary(self):
        if self.peek()[1] == "!":
            self.take("!")
            return Not(self.unary())
        return self.primary()

    def primary(self):
        kind, value, pos = self.peek()
        if value == "(":
            self.take("(")
            inner = self.state()
            self.take(")")
            return inner
        if value == "[":
            self.take("[")
            path = self.path()
            self.take("]")
            kind, op, pos = self.peek()
            if op not in ("<", "<=", ">=", ">"):
                raise FormulaSyntaxError("expected a comparison after ']'", pos)
            self.i += 1
            _, number, npos = self.take(kind="number")
            bound = Fraction(number)
            if bound > 1:
                raise FormulaSyntaxError("probability bound exceeds 1", npos)
            return Prob(path, op, bound)
        if kind == "ident":
            self.i += 1
            if value == "true":
                return TrueF()
            if value == "false":
                return FALSE
            if value in KEYWORDS:
                raise FormulaSyntaxError(f"path operator {value} outside brackets", pos)
            return Atom(value)
        got = repr(value) if kind != "end" else "end of input"
        raise FormulaSyntaxError(f"expected a state formula, found {got}", pos)

    def path(self):
        value = self.peek()[1]
        if value in _UNARY_PATHS:
            self.i += 1
            return _UNARY_PATHS[value](self.state())
        left = self.state()
        kind, value, pos = self.peek()
        if value not in _BINARY_PATHS:
            raise FormulaSyntaxError("expected AU, EU, AR or ER", pos)
        self.i += 1
        return _BINARY_PATHS[value](left, self.state())


def parse_formula(text: str) -> State:
    parser = _Parser(text)
    phi = parser.state()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {value!r}", pos)
    return phi


# -- printer -------------------------------------------------------------------------


def _operand(phi) -> str:
    text = format_formula(phi)
    return f"({text})" if isinstance(phi, And) else text


def format_path(path) -> str:
    name = type(path).__name__
    if isinstance(path, (AX, EX)):
        return f"{name} {_operand(path.arg)}"
    return f"{_operand(path.left)} {name} {_operand(path.right)}"


def format_formula(phi) -> str:
    """Concrete syntax that :func:`parse_formula` maps back to ``phi``."""
    if isinstance(phi, TrueF):
        return "true"
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Not):
        return "!" + _operand(phi.arg)
    if isinstance(phi, And):
        return f"{_operand(phi.left)} & {_operand(phi.right)}"
    if isinstance(phi, Prob):
        return f"[ {format_path(phi.path)} ]{phi.op}{phi.bound}"
    raise TypeError(f"not a state formula: {phi!r}")
