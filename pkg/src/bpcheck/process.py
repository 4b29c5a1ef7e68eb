"""Branching processes, tree prefixes and the line-oriented process format.

A process is a finite set of *types* together with probabilistic rules
``X -p-> Y1 ... Yk`` (k >= 1).  Probabilities are exact :class:`Fraction`
values throughout; decimal literals in input files are read exactly.

Text format::

    # comments run to end of line
    types: I B D
    rule I -> 9/10 : I
    rule I -> 0.1 : I B
    label I : i running
    colour I : 2
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    DuplicateRuleError,
    EmptySuccessorError,
    FormatError,
    InvalidPrefixError,
    NonPositiveProbabilityError,
    NotGeneratedError,
    ProbabilitySumError,
    ProcessError,
    UnknownTypeError,
)

Type = Hashable
Address = tuple[int, ...]


def as_fraction(value) -> Fraction:
    """Convert an int, Fraction or decimal/ratio string to an exact Fraction.

    Floats are rejected: ``0.1`` as a float is not one tenth.
    """
    if isinstance(value, float):
        raise TypeError("probabilities must be exact; pass a string or Fraction, not a float")
    if isinstance(value, str):
        value = value.strip()
    return Fraction(value)


def type_name(t: Type) -> str:
    """Printable name of a (possibly composite) type."""
    if isinstance(t, tuple):
        return "(" + ",".join(type_name(part) for part in t) + ")"
    if isinstance(t, Fraction):
        return str(t)
    return str(t)


class Rule(NamedTuple):
    source: Type
    probability: Fraction
    successors: tuple


@dataclass(frozen=True, eq=False)
class BranchingProcess:
    """A (labelled, coloured) multitype branching process.

    Construction does not validate; call :func:`validate` (the parser does).
    """

    types: tuple
    rules: tuple[Rule, ...]
    labels: Mapping[Type, frozenset] = field(default_factory=dict)
    colours: Mapping[Type, int] = field(default_factory=dict)
    _by_source: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "types", tuple(self.types))
        rules = tuple(
            Rule(r[0], as_fraction(r[1]), tuple(r[2])) for r in self.rules
        )
        object.__setattr__(self, "rules", rules)
        object.__setattr__(
            self, "labels", {t: frozenset(v) for t, v in dict(self.labels).items()}
        )
        object.__setattr__(self, "colours", {t: int(v) for t, v in dict(self.colours).items()})
        by_source: dict = {t: [] for t in self.types}
        for rule in rules:
            by_source.setdefault(rule.source, []).append(rule)
        object.__setattr__(self, "_by_source", {t: tuple(rs) for t, rs in by_source.items()})

    @classmethod
    def from_rules(cls, rules: Iterable[tuple], types: Sequence | None = None, labels=None,
                   colours=None) -> "BranchingProcess":
        """Build a process from ``(source, probability, successors)`` triples.

        Types default to first-appearance order over sources and successors.
        """
        rules = list(rules)
        if types is None:
            seen: dict = {}
            for src, _, succ in rules:
                seen.setdefault(src, None)
                for y in succ:
                    seen.setdefault(y, None)
            types = list(seen)
        return cls(tuple(types), tuple(rules), labels or {}, colours or {})

    def rules_of(self, t: Type) -> tuple[Rule, ...]:
        try:
            return self._by_source[t]
        except KeyError:
            raise UnknownTypeError(t) from None

    def require(self, t: Type) -> None:
        if t not in self._by_source:
            raise UnknownTypeError(t)

    @property
    def max_arity(self) -> int:
        """The bound K on successor-tuple lengths (0 for a rule-less process)."""
        return max((len(r.successors) for r in self.rules), default=0)

    @property
    def propositions(self) -> frozenset:
        out: set = set()
        for props in self.labels.values():
            out |= props
        return frozenset(out)

    def label(self, t: Type) -> frozenset:
        return self.labels.get(t, frozenset())

    def successor_graph(self) -> dict:
        """Type digraph: X -> set of types occurring in some X-rule."""
        return {t: {y for r in self.rules_of(t) for y in r.successors} for t in self.types}

    def with_colours(self, colours: Mapping[Type, int]) -> "BranchingProcess":
        return BranchingProcess(self.types, self.rules, self.labels, colours)


def validate(bp: BranchingProcess) -> None:
    """Raise a :class:`ProcessError` unless all process invariants hold."""
    declared = set(bp.types)
    if len(declared) != len(bp.types):
        raise ProcessError("duplicate type declaration")
    seen = set()
    for rule in bp.rules:
        if rule.source not in declared:
            raise UnknownTypeError(rule.source)
        if not rule.successors:
            raise EmptySuccessorError(rule.source)
        for y in rule.successors:
            if y not in declared:
                raise UnknownTypeError(y)
        if rule.probability <= 0:
            raise NonPositiveProbabilityError(rule.source, rule.probability)
        key = (rule.source, rule.successors)
        if key in seen:
            raise DuplicateRuleError(rule.source, rule.successors)
        seen.add(key)
        if rule.probability > 1:
            raise ProbabilitySumError(rule.source, rule.probability)
    for t in bp.types:
        total = sum((r.probability for r in bp.rules_of(t)), Fraction(0))
        if total != 1:
            raise ProbabilitySumError(t, total)
    for t in list(bp.labels) + list(bp.colours):
        if t not in declared:
            raise UnknownTypeError(t)
    for t, c in bp.colours.items():
        if c < 0:
            raise ProcessError(f"colour of {t!r} is negative")


def reachable_types(bp: BranchingProcess, start: Type) -> set:
    """Least set containing ``start`` and closed under rule successors."""
    bp.require(start)
    graph = bp.successor_graph()
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in graph[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


# -- tree prefixes -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TreePrefix:
    """A finite labelled tree; node addresses are tuples of 1-based child indices."""

    nodes: frozenset
    label: Mapping[Address, Type]
    branching: Mapping[Address, int]

    def __post_init__(self):
        nodes = frozenset(tuple(n) for n in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if () not in nodes:
            raise InvalidPrefixError("the root () is missing")
        if set(self.label) != nodes or set(self.branching) != nodes:
            raise InvalidPrefixError("label and branching maps must cover exactly the nodes")
        for w in nodes:
            degree = self.branching[w]
            if degree < 0:
                raise InvalidPrefixError(f"negative degree at {w}")
            for k in range(1, degree + 1):
                if w + (k,) not in nodes:
                    raise InvalidPrefixError(f"child {k} of {w} missing")
            if w and (w[:-1] not in nodes or w[-1] > self.branching[w[:-1]] or w[-1] < 1):
                raise InvalidPrefixError(f"node {w} has no matching parent slot")

    @classmethod
    def from_nested(cls, tree) -> "TreePrefix":
        """Build from ``(type, [child, ...])`` tuples; a bare type is a leaf."""
        nodes, label, branching = set(), {}, {}

        def walk(sub, addr):
            if isinstance(sub, tuple) and len(sub) == 2 and isinstance(sub[1], list):
                t, children = sub
            else:
                t, children = sub, []
            nodes.add(addr)
            label[addr] = t
            branching[addr] = len(children)
            for k, child in enumerate(children, start=1):
                walk(child, addr + (k,))

        walk(tree, ())
        return cls(frozenset(nodes), label, branching)

    @property
    def root(self) -> Type:
        return self.label[()]

    def successor_word(self, w: Address) -> tuple:
        return tuple(self.label[w + (k,)] for k in range(1, self.branching[w] + 1))

    def depth(self) -> int:
        return max(len(w) for w in self.nodes)

    def internal_nodes(self) -> list[Address]:
        return sorted(w for w in self.nodes if self.branching[w] > 0)

    def leaves(self) -> list[Address]:
        return sorted(w for w in self.nodes if self.branching[w] == 0)

    def __eq__(self, other):
        if not isinstance(other, TreePrefix):
            return NotImplemented
        return (self.nodes == other.nodes and dict(self.label) == dict(other.label)
                and dict(self.branching) == dict(other.branching))

    def __hash__(self):
        return hash(tuple(sorted((w, self.label[w]) for w in self.nodes)))


def prefix_probability(bp: BranchingProcess, t: TreePrefix) -> Fraction:
    """Product of the rule probabilities applied at the internal nodes of ``t``."""
    lookup = {(r.source, r.successors): r.probability for r in bp.rules}
    bp.require(t.root)
    p = Fraction(1)
    for w in t.internal_nodes():
        key = (t.label[w], t.successor_word(w))
        if key not in lookup:
            raise NotGeneratedError(w, *key)
        p *= lookup[key]
    return p


# -- text format ---------------------------------------------------------------

_IDENT = r"[^\s:#]+"
_RULE_RE = re.compile(rf"^rule\s+({_IDENT})\s*->\s*([0-9./]+)\s*:\s*(.*)$")
_LABEL_RE = re.compile(rf"^label\s+({_IDENT})\s*:\s*(.*)$")
_COLOUR_RE = re.compile(rf"^colou?r\s+({_IDENT})\s*:\s*(\S+)\s*$")
_TYPES_RE = re.compile(r"^types\s*:\s*(.*)$")
_PROP_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _content_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def parse_probability(token: str) -> Fraction:
    if not re.fullmatch(r"\d+(\.\d+)?|\.\d+|\d+/\d+", token):
        raise ValueError(f"bad probability literal {token!r}")
    return Fraction(token)


def parse_process(text: str, source: str | None = None) -> BranchingProcess:
    """Parse and validate a process description.

    Validation errors keep their :class:`ProcessError` subclass and gain
    ``line``/``source`` attributes pointing at the offending declaration.
    """
    types: list | None = None
    rules, labels, colours = [], {}, {}
    first_line: dict = {}
    for number, line in _content_lines(text):
        if m := _TYPES_RE.match(line):
            if types is not None:
                raise FormatError("second 'types:' declaration", number, source)
            types = m.group(1).split()
            first_line.update({t: number for t in types if t not in first_line})
        elif m := _RULE_RE.match(line):
            src, prob, succ = m.groups()
            try:
                p = parse_probability(prob)
            except (ValueError, ZeroDivisionError) as exc:
                raise FormatError(str(exc), number, source) from None
            rules.append((src, p, tuple(succ.split())))
            first_line.setdefault(("rule", src), number)
        elif m := _LABEL_RE.match(line):
            t, props = m.groups()
            props = props.split()
            for prop in props:
                if not _PROP_RE.match(prop):
                    raise FormatError(f"bad proposition name {prop!r}", number, source)
            labels[t] = labels.get(t, frozenset()) | frozenset(props)
        elif m := _COLOUR_RE.match(line):
            t, value = m.groups()
            if not value.isdigit():
                raise FormatError(f"colour must be a nonnegative integer, got {value!r}",
                                  number, source)
            if t in colours:
                raise FormatError(f"type {t!r} coloured twice", number, source)
            colours[t] = int(value)
        else:
            raise FormatError(f"cannot parse line {line!r}", number, source)
    if types is None:
        raise FormatError("missing 'types:' declaration", None, source)
    bp = BranchingProcess(tuple(types), tuple(rules), labels, colours)
    try:
        validate(bp)
    except ProcessError as exc:
        t = getattr(exc, "type", None)
        exc.line = first_line.get(("rule", t), first_line.get(t))
        exc.source = source
        raise
    return bp


def load_process(path) -> BranchingProcess:
    path = Path(path)
    return parse_process(path.read_text(encoding="utf-8"), source=str(path))


def format_process(bp: BranchingProcess) -> str:
    """Inverse of :func:`parse_process` for processes over plain string types."""
    lines = ["types: " + " ".join(type_name(t) for t in bp.types)]
    for r in bp.rules:
        succ = " ".join(type_name(y) for y in r.successors)
        lines.append(f"rule {type_name(r.source)} -> {r.probability} : {succ}")
    for t in bp.types:
        if bp.label(t):
            lines.append(f"label {type_name(t)} : " + " ".join(sorted(bp.label(t))))
    for t in bp.types:
        if t in bp.colours:
            lines.append(f"colour {type_name(t)} : {bp.colours[t]}")
    return "\n".join(lines) + "\n"
