"""Deterministic parity tree automata and the probability that a random tree is accepted.

The pipeline is: product of process and automaton (a coloured process), then
the analysis of *good* trees for a colouring: trees in which on every branch
the largest colour seen infinitely often is even.  The probability of a good
tree equals the probability of reaching the good region ``G`` on all branches,
where ``G`` holds the types all of whose reachable types are *clean*.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Hashable, Mapping

from .errors import (
    AlphabetMismatchError,
    ArityTooSmallError,
    AutomatonError,
    FormatError,
    MissingColourError,
)
from .graph import reachable
from .pps import DEFAULT_SETTINGS, Enclosure, FixedPointSolver, SolverSettings, build_af_pps
from .pps import decide_one
from .process import BranchingProcess, Rule, Type, reachable_types

State = Hashable


@dataclass(frozen=True, eq=False)
class Dpta:
    """Top-down deterministic parity tree automaton with a declared arity bound."""

    states: tuple
    alphabet: tuple
    initial: State
    transition: Mapping[tuple, tuple]
    colour: Mapping[State, int]
    max_arity: int

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        states = set(self.states)
        if self.initial not in states:
            raise AutomatonError(f"initial state {self.initial!r} is not a state")
        for q in self.states:
            if q not in self.colour:
                raise AutomatonError(f"state {q!r} has no colour")
            if self.colour[q] < 0:
                raise AutomatonError(f"state {q!r} has a negative colour")
        for q in self.states:
            for x in self.alphabet:
                for n in range(1, self.max_arity + 1):
                    targets = self.transition.get((q, x, n))
                    if targets is None:
                        raise AutomatonError(f"transition ({q}, {x}, {n}) is undefined")
                    if len(targets) != n:
                        raise AutomatonError(
                            f"transition ({q}, {x}, {n}) yields {len(targets)} states")
                    for t in targets:
                        if t not in states:
                            raise AutomatonError(f"transition ({q}, {x}, {n}) targets {t!r}")

    def delta(self, q: State, x: Type, n: int) -> tuple:
        return tuple(self.transition[(q, x, n)])


@dataclass(frozen=True, eq=False)
class WordAutomaton:
    """Deterministic parity word automaton: ``transition[(q, X)] = q'``."""

    states: tuple
    alphabet: tuple
    initial: State
    transition: Mapping[tuple, State]
    colour: Mapping[State, int]

    def __post_init__(self):
        for q in self.states:
            for x in self.alphabet:
                if (q, x) not in self.transition:
                    raise AutomatonError(f"word transition ({q}, {x}) is undefined")


def lift_word_automaton(dwa: WordAutomaton, max_arity: int) -> Dpta:
    """Tree automaton running ``dwa`` down every branch (same successor for all children)."""
    table = {}
    for (q, x), target in dwa.transition.items():
        for n in range(1, max_arity + 1):
            table[(q, x, n)] = (target,) * n
    return Dpta(dwa.states, dwa.alphabet, dwa.initial, table, dict(dwa.colour), max_arity)


def all_branches_hit(alphabet, targets, max_arity: int) -> Dpta:
    """Two-state automaton accepting the trees in which every branch meets ``targets``."""
    targets = set(targets)
    alphabet = tuple(alphabet)
    transition = {}
    for x in alphabet:
        after = "done" if x in targets else "searching"
        transition[("searching", x)] = after
        transition[("done", x)] = "done"
    word = WordAutomaton(("searching", "done"), alphabet, "searching", transition,
                         {"searching": 1, "done": 2})
    return lift_word_automaton(word, max_arity)


# -- products --------------------------------------------------------------------


class ColouredProcess(BranchingProcess):
    """A branching process whose colouring is total."""

    def __post_init__(self):
        super().__post_init__()
        for t in self.types:
            if t not in self.colours:
                raise MissingColourError(t)


def coloured(bp: BranchingProcess) -> ColouredProcess:
    if isinstance(bp, ColouredProcess):
        return bp
    return ColouredProcess(bp.types, bp.rules, bp.labels, bp.colours)


def product(bp: BranchingProcess, aut: Dpta) -> ColouredProcess:
    """Process over ``(type, state)`` pairs, coloured by the automaton state."""
    missing = set(bp.types) - set(aut.alphabet)
    extra = set(aut.alphabet) - set(bp.types)
    if missing or extra:
        raise AlphabetMismatchError(missing, extra)
    if aut.max_arity < bp.max_arity:
        raise ArityTooSmallError(aut.max_arity, bp.max_arity)
    types = tuple((x, q) for x in bp.types for q in aut.states)
    rules = []
    for x in bp.types:
        for q in aut.states:
            for r in bp.rules_of(x):
                states = aut.delta(q, x, len(r.successors))
                rules.append(Rule((x, q), r.probability,
                                  tuple(zip(r.successors, states))))
    colours = {(x, q): aut.colour[q] for x, q in types}
    return ColouredProcess(types, tuple(rules), {}, colours)


# -- good trees --------------------------------------------------------------------


def n_set(cbp: BranchingProcess, x: Type) -> set:
    """Types from which no tree has an ``x``-closing path."""
    cbp = coloured(cbp)
    cbp.require(x)
    bound = cbp.colours[x]
    low = {t for t in cbp.types if cbp.colours[t] <= bound}
    graph = {t: {y for y in succ if y in low} for t, succ in cbp.successor_graph().items()
             if t in low}
    out = set(cbp.types) - low
    for y in low:
        # a path of length >= 1 from y to x inside the colour-bounded graph
        if x not in reachable(graph, graph[y]):
            out.add(y)
    return out


def clean_set(cbp: BranchingProcess) -> set:
    """Even types, and odd types ``X`` with Pr[t_X meets N_X on all branches] = 1."""
    cbp = coloured(cbp)
    clean = set()
    for x in cbp.types:
        if cbp.colours[x] % 2 == 0:
            clean.add(x)
            continue
        pps = build_af_pps(cbp, n_set(cbp, x))
        if decide_one(pps)[pps.index(x)]:
            clean.add(x)
    return clean


def good_set(cbp: BranchingProcess, clean: set | None = None) -> set:
    """Types all of whose reachable types are clean."""
    cbp = coloured(cbp)
    clean = clean_set(cbp) if clean is None else clean
    return {x for x in cbp.types if reachable_types(cbp, x) <= clean}


def qualitative_good(cbp: BranchingProcess, x: Type) -> bool:
    """Whether Pr[t_x is good] = 1."""
    cbp = coloured(cbp)
    cbp.require(x)
    return reachable_types(cbp, x) <= clean_set(cbp)


@dataclass
class ParityAnalysis:
    n_sets: dict
    clean: set
    good_region: set
    verdicts: dict = field(default_factory=dict)


def analyse(cbp: BranchingProcess) -> ParityAnalysis:
    """All sets of the qualitative analysis, with the per-type verdict Pr[good] = 1."""
    cbp = coloured(cbp)
    n_sets = {x: n_set(cbp, x) for x in cbp.types}
    clean = clean_set(cbp)
    good = good_set(cbp, clean)
    return ParityAnalysis(n_sets, clean, good, {x: x in good for x in cbp.types})


@dataclass
class GoodResult:
    """Probability of a good tree from one start type, with its provenance."""

    start: Type
    enclosure: Enclosure
    is_zero: bool
    is_one: bool
    method: str
    good_region: set


def good_result(cbp: BranchingProcess, x: Type, settings: SolverSettings = DEFAULT_SETTINGS,
                solver: FixedPointSolver | None = None) -> GoodResult:
    cbp = coloured(cbp)
    cbp.require(x)
    good = good_set(cbp)
    if solver is None:
        solver = FixedPointSolver(build_af_pps(cbp, good), settings)
    i = solver.pps.index(x)
    if solver.is_qualitative(i):
        value = solver.exact_decided(i)
        return GoodResult(x, Enclosure.point(value), value == 0, value == 1, "qualitative", good)
    return GoodResult(x, solver.enclosure(i), False, False, "numeric", good)


def good_probability(cbp: BranchingProcess, x: Type, epsilon=None,
                     settings: SolverSettings = DEFAULT_SETTINGS) -> Enclosure:
    """Enclosure of Pr[t_x is good], exact when the answer is 0 or 1."""
    if epsilon is not None:
        settings = SolverSettings(Fraction(epsilon), settings.max_iterations,
                                  settings.max_denominator, settings.max_refinements)
    return good_result(cbp, x, settings).enclosure


def accept_probability(bp: BranchingProcess, aut: Dpta, x: Type, epsilon=None,
                       settings: SolverSettings = DEFAULT_SETTINGS) -> Enclosure:
    """Enclosure of Pr[t_x is accepted by ``aut``]."""
    bp.require(x)
    return good_probability(product(bp, aut), (x, aut.initial), epsilon, settings)


# -- text format -------------------------------------------------------------------

_STATES_RE = re.compile(r"^states\s*:\s*(.*)$")
_INITIAL_RE = re.compile(r"^initial\s*:\s*(\S+)\s*$")
_ALPHABET_RE = re.compile(r"^alphabet\s*:\s*(.*)$")
_ARITY_RE = re.compile(r"^arity\s*:\s*(\d+)\s*$")
_COLOUR_RE = re.compile(r"^colou?r\s+(\S+)\s*:\s*(\d+)\s*$")
_TREE_DELTA_RE = re.compile(r"^delta\s+(\S+)\s+(\S+)\s+(\d+)\s*->\s*(.*)$")
_WORD_DELTA_RE = re.compile(r"^delta\s+(\S+)\s+(\S+)\s*->\s*(\S+)\s*$")


@dataclass
class LoadedAutomaton:
    """A parsed automaton file: either a tree automaton or a word automaton to lift."""

    tree: Dpta | None = None
    word: WordAutomaton | None = None

    def for_process(self, bp: BranchingProcess) -> Dpta:
        if self.tree is not None:
            return self.tree
        return lift_word_automaton(self.word, max(1, bp.max_arity))


def parse_automaton(text: str, source: str | None = None, alphabet=None) -> LoadedAutomaton:
    """Parse the automaton format.

    A line ``word-automaton`` switches to word transitions ``delta q X -> q'``.
    The alphabet is the ``alphabet:`` line, else ``alphabet``, else the letters
    used in transitions.  Tree automata must define every ``(q, X, n)`` with
    ``n`` up to the ``arity:`` declaration (default: largest arity mentioned).
    """
    states = initial = declared_alphabet = arity = None
    colours: dict = {}
    tree_delta: dict = {}
    word_delta: dict = {}
    word_mode = False
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "word-automaton":
            word_mode = True
        elif m := _STATES_RE.match(line):
            states = tuple(m.group(1).split())
        elif m := _INITIAL_RE.match(line):
            initial = m.group(1)
        elif m := _ALPHABET_RE.match(line):
            declared_alphabet = tuple(m.group(1).split())
        elif m := _ARITY_RE.match(line):
            arity = int(m.group(1))
        elif m := _COLOUR_RE.match(line):
            colours[m.group(1)] = int(m.group(2))
        elif word_mode and (m := _WORD_DELTA_RE.match(line)):
            q, x, target = m.groups()
            if (q, x) in word_delta:
                raise FormatError(f"duplicate transition for ({q}, {x})", number, source)
            word_delta[(q, x)] = target
        elif not word_mode and (m := _TREE_DELTA_RE.match(line)):
            q, x, n, targets = m.groups()
            key = (q, x, int(n))
            if key in tree_delta:
                raise FormatError(f"duplicate transition for {key}", number, source)
            tree_delta[key] = tuple(targets.split())
        else:
            raise FormatError(f"cannot parse line {line!r}", number, source)
    if states is None or initial is None:
        raise FormatError("automaton needs 'states:' and 'initial:' lines", None, source)
    letters = declared_alphabet or (tuple(alphabet) if alphabet is not None else None)
    try:
        if word_mode:
            if letters is None:
                letters = tuple(dict.fromkeys(x for _, x in word_delta))
            return LoadedAutomaton(word=WordAutomaton(states, letters, initial, word_delta,
                                                    colours))
        if letters is None:
            letters = tuple(dict.fromkeys(x for _, x, _ in tree_delta))
        if arity is None:
            arity = max((n for _, _, n in tree_delta), default=1)
        return LoadedAutomaton(tree=Dpta(states, letters, initial, tree_delta, colours, arity))
    except AutomatonError as exc:
        raise FormatError(str(exc), None, source) from exc


def load_automaton(path, alphabet=None) -> LoadedAutomaton:
    path = Path(path)
    return parse_automaton(path.read_text(encoding="utf-8"), str(path), alphabet)
