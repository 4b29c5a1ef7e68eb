"""Model checking labelled branching processes against PTTL.

Truth values are computed bottom-up for every type.  Probability operators
reduce to three core cases:

* ``AX φ`` (and ``EX φ``) in closed form, exact;
* ``φ AU ψ`` by a three-status product process and an AF query;
* ``φ AR ψ`` by the analogous product and an AG query, rewritten to AF.

``EU`` and ``ER`` go through their duals:
``φ EU ψ = ¬(¬φ AR ¬ψ)`` and ``φ ER ψ = ¬(¬φ AU ¬ψ)``, comparing the dual's
probability against ``1 - r`` with the mirrored comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..errors import PreconditionViolatedError, UndecidedError, UnknownAtomError
from ..graph import find_path, reachable
from ..pps import (
    DEFAULT_SETTINGS,
    Enclosure,
    FixedPointSolver,
    SolverSettings,
    build_af_pps,
    holds,
)
from ..process import BranchingProcess, Rule, Type
from .syntax import (
    AR,
    AU,
    AX,
    ER,
    EU,
    EX,
    MIRROR,
    And,
    Atom,
    Not,
    Prob,
    TrueF,
    atoms,
    format_formula,
)

FAIL = Fraction(0)
PENDING = Fraction(1, 2)
DONE = Fraction(1)
STATUSES = (FAIL, PENDING, DONE)


def prob_ax(lbp: BranchingProcess, sat: Mapping[Type, bool], x: Type) -> Fraction:
    """Pr[every child of the root satisfies φ], given φ's truth table ``sat``."""
    return sum((r.probability for r in lbp.rules_of(x) if all(sat[y] for y in r.successors)),
               Fraction(0))


def prob_ex(lbp: BranchingProcess, sat: Mapping[Type, bool], x: Type) -> Fraction:
    """Pr[some child of the root satisfies φ]."""
    return sum((r.probability for r in lbp.rules_of(x) if any(sat[y] for y in r.successors)),
               Fraction(0))


@dataclass(frozen=True, eq=False)
class StatusProcess:
    """Product of a process with the status component {0, 1/2, 1}."""

    process: BranchingProcess
    status: Mapping[Type, Fraction]

    def start(self, x: Type) -> tuple:
        return (x, self.status[x])


def _status_product(lbp: BranchingProcess, status: Mapping[Type, Fraction]) -> StatusProcess:
    types = tuple((x, s) for x in lbp.types for s in STATUSES)
    rules = []
    for r in lbp.rules:
        for s in STATUSES:
            if s == PENDING:
                succ = tuple((y, status[y]) for y in r.successors)
            else:
                succ = tuple((y, s) for y in r.successors)
            rules.append(Rule((r.source, s), r.probability, succ))
    return StatusProcess(BranchingProcess(types, tuple(rules)), dict(status))


def build_au_product(lbp: BranchingProcess, sat_phi, sat_psi) -> tuple[StatusProcess, set]:
    """Status process for ``φ AU ψ`` and its target set ``Γ × {1}``."""
    status = {}
    for x in lbp.types:
        if sat_psi[x]:
            status[x] = DONE
        elif sat_phi[x]:
            status[x] = PENDING
        else:
            status[x] = FAIL
    sp = _status_product(lbp, status)
    return sp, {(x, DONE) for x in lbp.types}


def build_ar_product(lbp: BranchingProcess, sat_phi, sat_psi) -> tuple[StatusProcess, set]:
    """Status process for ``φ AR ψ`` and the set ``Γ × {1/2, 1}`` that must hold globally."""
    status = {}
    for x in lbp.types:
        if not sat_psi[x]:
            status[x] = FAIL
        elif not sat_phi[x]:
            status[x] = PENDING
        else:
            status[x] = DONE
    sp = _status_product(lbp, status)
    return sp, {(x, s) for x in lbp.types for s in (PENDING, DONE)}


def ag_to_af_targets(bp: BranchingProcess, safe) -> set:
    """Types of ``safe`` that cannot leave it; Pr[AG safe] = Pr[AF of this set].

    Requires that ``safe`` is unreachable from its complement.
    """
    safe = set(safe)
    graph = bp.successor_graph()
    outside = [t for t in bp.types if t not in safe]
    witness = find_path(graph, outside, safe)
    if witness is not None:
        raise PreconditionViolatedError("a safe type is reachable from an unsafe one", witness)
    return {y for y in safe if reachable(graph, [y]) <= safe}


@dataclass
class ProbRecord:
    """Outcome of one probability operator at every type."""

    formula: str
    probability: dict = field(default_factory=dict)  # type -> Enclosure
    method: dict = field(default_factory=dict)  # type -> str
    verdict: dict = field(default_factory=dict)  # type -> bool


class Checker:
    """Recursive evaluator; memoises subformulae and keeps one record per Prob node."""

    def __init__(self, lbp: BranchingProcess, settings: SolverSettings = DEFAULT_SETTINGS):
        self.lbp = lbp
        self.settings = settings
        self.memo: dict = {}
        self.records: dict = {}
        self.numeric_runs = 0

    def sat(self, phi) -> dict:
        if phi in self.memo:
            return self.memo[phi]
        unknown = atoms(phi) - self.lbp.propositions
        if unknown:
            raise UnknownAtomError(sorted(unknown)[0])
        types = self.lbp.types
        if isinstance(phi, TrueF):
            out = {x: True for x in types}
        elif isinstance(phi, Atom):
            out = {x: phi.name in self.lbp.label(x) for x in types}
        elif isinstance(phi, Not):
            inner = self.sat(phi.arg)
            out = {x: not inner[x] for x in types}
        elif isinstance(phi, And):
            a, b = self.sat(phi.left), self.sat(phi.right)
            out = {x: a[x] and b[x] for x in types}
        elif isinstance(phi, Prob):
            out = self._prob(phi)
        else:
            raise TypeError(f"not a state formula: {phi!r}")
        self.memo[phi] = out
        return out

    def _negated(self, phi) -> dict:
        return self.sat(Not(phi))

    def _prob(self, phi: Prob) -> dict:
        path, op, r = phi.path, phi.op, phi.bound
        record = ProbRecord(format_formula(phi))
        self.records[phi] = record
        if isinstance(path, (AX, EX)):
            sat = self.sat(path.arg)
            fn = prob_ax if isinstance(path, AX) else prob_ex
            for x in self.lbp.types:
                p = fn(self.lbp, sat, x)
                record.probability[x] = Enclosure.point(p)
                record.method[x] = "exact"
                record.verdict[x] = holds(p, op, r)
            return dict(record.verdict)

        if isinstance(path, AU):
            sp, targets = build_au_product(self.lbp, self.sat(path.left), self.sat(path.right))
            dual = False
        elif isinstance(path, ER):
            sp, targets = build_au_product(self.lbp, self._negated(path.left),
                                           self._negated(path.right))
            dual = True
        elif isinstance(path, AR):
            sp, safe = build_ar_product(self.lbp, self.sat(path.left), self.sat(path.right))
            targets = ag_to_af_targets(sp.process, safe)
            dual = False
        elif isinstance(path, EU):
            sp, safe = build_ar_product(self.lbp, self._negated(path.left),
                                        self._negated(path.right))
            targets = ag_to_af_targets(sp.process, safe)
            dual = True
        else:
            raise TypeError(f"not a path formula: {path!r}")

        solver = FixedPointSolver(build_af_pps(sp.process, targets), self.settings)
        q_op, q_r = (MIRROR[op], 1 - r) if dual else (op, r)
        for x in self.lbp.types:
            i = solver.pps.index(sp.start(x))
            verdict, enc, method = solver.compare(i, q_op, q_r)
            if dual:
                enc = Enclosure(1 - enc.upper, 1 - enc.lower,
                                None if enc.exact is None else 1 - enc.exact)
            record.probability[x] = enc
            record.method[x] = method
            if verdict is None:
                self.numeric_runs += solver.numeric_runs
                raise UndecidedError(record.formula, x, enc)
            record.verdict[x] = verdict
        self.numeric_runs += solver.numeric_runs
        return dict(record.verdict)


def sat_set(lbp: BranchingProcess, phi, settings: SolverSettings = DEFAULT_SETTINGS) -> dict:
    """Truth value of ``phi`` at every type of ``lbp``."""
    return Checker(lbp, settings).sat(phi)
