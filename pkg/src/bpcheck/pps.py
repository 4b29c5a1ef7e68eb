"""Monotone polynomial fixed-point systems ``x = f(x)`` and their least solutions.

Coefficients are nonnegative rationals and ``f(1) <= 1``.  The quantities of
interest are components of the least nonnegative fixed point (LFP).

Qualitative questions (is a component 0? is it 1?) are decided exactly by
graph analysis plus one exact LP per strongly connected component.  Other
components are enclosed by certified rational bounds:

* an upper vector ``u`` with ``f(u) <= u`` (hence ``u >= LFP``), checked in
  exact arithmetic together with a witness ``w > 0, f'(u) w < w`` showing
  that the spectral radius of ``f'(u)`` is below one.  Because ``f'`` is
  monotone, ``f`` then has no fixed point in ``[0, u]`` other than the LFP;
* lower vectors ``z`` with ``z <= f(z)`` and ``z <= u``: Kleene iteration from
  such ``z`` stays in ``[0, u]`` and so converges to the LFP, giving ``z <= LFP``.
  Lower iterates come from Newton steps computed in multiprecision floating
  point and are discarded in favour of exact Kleene steps when they fail the
  check;
* exact values: a rational ``y <= u`` with ``f(y) = y`` equals the LFP.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

import mpmath

from .errors import (
    InfeasibleSystemError,
    NotAfShapeError,
    NotIrreducibleError,
    PrecisionExhaustedError,
)
from .graph import reachable, strongly_connected_components
from .lp import feasible_point
from .process import BranchingProcess, type_name

Monomial = tuple[int, ...]
Polynomial = tuple[tuple[Fraction, Monomial], ...]

ZERO = Fraction(0)
ONE = Fraction(1)
OPS = ("<", "<=", ">=", ">")
_PRECISIONS = (64, 128, 256, 512, 1024)


def holds(value, op: str, tau) -> bool:
    if op == "<":
        return value < tau
    if op == "<=":
        return value <= tau
    if op == ">=":
        return value >= tau
    if op == ">":
        return value > tau
    raise ValueError(f"unknown comparison {op!r}")


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances and budgets for the numeric routines."""

    epsilon: Fraction = Fraction(1, 10**9)
    max_iterations: int = 10**6
    max_denominator: int = 10**6
    max_refinements: int = 3

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_iterations < 1 or self.max_denominator < 1 or self.max_refinements < 0:
            raise ValueError("budgets must be positive")


DEFAULT_SETTINGS = SolverSettings()


@dataclass(frozen=True)
class Enclosure:
    lower: Fraction
    upper: Fraction
    exact: Fraction | None = None

    def __post_init__(self):
        if self.exact is not None and not (self.lower == self.exact == self.upper):
            raise ValueError("an exact enclosure must have lower == exact == upper")
        if not (0 <= self.lower <= self.upper <= 1):
            raise ValueError(f"bad enclosure [{self.lower}, {self.upper}]")

    @classmethod
    def point(cls, value) -> "Enclosure":
        value = Fraction(value)
        return cls(value, value, value)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __contains__(self, value) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True, eq=False)
class Pps:
    """``x_i = sum_k c_k * prod(x_j for j in monomial_k)`` for each variable ``i``.

    ``variables`` carries what each variable stands for (a type, a product
    type, ...).  Monomials are sorted index tuples; the constant monomial is ``()``.
    """

    variables: tuple
    equations: tuple[Polynomial, ...]
    _deps: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(self.equations) != len(self.variables):
            raise ValueError("one equation per variable required")
        m = len(self.variables)
        eqs = []
        for poly in self.equations:
            merged: dict = {}
            for coeff, mono in poly:
                coeff = Fraction(coeff)
                mono = tuple(sorted(mono))
                if coeff < 0:
                    raise ValueError("coefficients must be nonnegative")
                if any(not 0 <= j < m for j in mono):
                    raise ValueError(f"monomial {mono} refers to a missing variable")
                if coeff:
                    merged[mono] = merged.get(mono, ZERO) + coeff
            eqs.append(tuple(sorted(((c, mono) for mono, c in merged.items()),
                                    key=lambda cm: (len(cm[1]), cm[1]))))
        object.__setattr__(self, "equations", tuple(eqs))
        object.__setattr__(self, "_deps", tuple(
            frozenset(j for _, mono in poly for j in mono) for poly in eqs))

    def __len__(self):
        return len(self.variables)

    def index(self, var: Hashable) -> int:
        return self.variables.index(var)

    def dependencies(self, i: int) -> frozenset:
        return self._deps[i]

    def dependency_graph(self) -> dict:
        return {i: self._deps[i] for i in range(len(self))}

    def closure(self, i: int) -> list[int]:
        """Indices reachable from ``i`` in the dependency graph, ascending."""
        return sorted(reachable(self.dependency_graph(), [i]))

    def restrict(self, indices: Sequence[int]) -> "Pps":
        """Subsystem on a dependency-closed index set."""
        pos = {j: k for k, j in enumerate(indices)}
        eqs = []
        for i in indices:
            eqs.append(tuple((c, tuple(pos[j] for j in mono)) for c, mono in self.equations[i]))
        return Pps(tuple(self.variables[i] for i in indices), tuple(eqs))

    def evaluate(self, x: Sequence) -> list:
        out = []
        for poly in self.equations:
            total = 0
            for coeff, mono in poly:
                term = coeff
                for j in mono:
                    term = term * x[j]
                total = total + term
            out.append(total)
        return out

    def jacobian(self, x: Sequence, rows: Sequence[int] | None = None,
                 cols: Sequence[int] | None = None) -> list[list]:
        rows = range(len(self)) if rows is None else rows
        cols = range(len(self)) if cols is None else cols
        col_pos = {j: k for k, j in enumerate(cols)}
        out = []
        for i in rows:
            row = [0] * len(col_pos)
            for coeff, mono in self.equations[i]:
                for p, j in enumerate(mono):
                    if j not in col_pos:
                        continue
                    term = coeff
                    for q, jj in enumerate(mono):
                        if q != p:
                            term = term * x[jj]
                    row[col_pos[j]] = row[col_pos[j]] + term
            out.append(row)
        return out

    def check_feasible(self) -> None:
        for i, value in enumerate(self.evaluate([ONE] * len(self))):
            if value > 1:
                raise InfeasibleSystemError(i, value)

    def is_af_shaped(self) -> bool:
        for poly in self.equations:
            if poly == ((ONE, ()),):
                continue
            if sum((c for c, _ in poly), ZERO) != 1:
                return False
        return True

    def dump(self) -> str:
        """One equation per line, e.g. ``x2 = 1/2*x3 + 1/2*x2*x3``."""
        names = [f"x{type_name(v)}" for v in self.variables]
        lines = []
        for i, poly in enumerate(self.equations):
            terms = []
            for coeff, mono in poly:
                factors = []
                for j in sorted(set(mono)):
                    power = mono.count(j)
                    factors.append(names[j] + (f"^{power}" if power > 1 else ""))
                if not factors:
                    terms.append(str(coeff))
                elif coeff == 1:
                    terms.append("*".join(factors))
                else:
                    terms.append("*".join([str(coeff)] + factors))
            lines.append(f"{names[i]} = " + (" + ".join(terms) if terms else "0"))
        return "\n".join(lines) + ("\n" if lines else "")


def build_af_pps(bp: BranchingProcess, targets: Iterable) -> Pps:
    """System whose LFP at ``x_X`` is Pr[every branch of t_X meets ``targets``]."""
    targets = set(targets)
    for t in targets:
        bp.require(t)
    pos = {t: i for i, t in enumerate(bp.types)}
    eqs = []
    for t in bp.types:
        if t in targets:
            eqs.append(((ONE, ()),))
        else:
            eqs.append(tuple((r.probability, tuple(pos[y] for y in r.successors))
                             for r in bp.rules_of(t)))
    return Pps(bp.types, tuple(eqs))


# -- Kleene iteration and qualitative deciders ---------------------------------


def _round_down(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction((x.numerator * scale) // x.denominator, scale)


def kleene(pps: Pps, k: int, round_bits: int | None = None) -> list[Fraction]:
    """``f^k(0)`` in exact arithmetic.

    With ``round_bits`` every iterate is rounded down to a multiple of
    ``2**-round_bits``; the result is still a monotone sequence of lower bounds.
    """
    x = [ZERO] * len(pps)
    for _ in range(k):
        x = pps.evaluate(x)
        if round_bits is not None:
            x = [_round_down(v, round_bits) for v in x]
    return x


def decide_zero(pps: Pps) -> list[bool]:
    """``True`` exactly at the components whose LFP value is 0."""
    positive = [False] * len(pps)
    changed = True
    while changed:
        changed = False
        for i, poly in enumerate(pps.equations):
            if not positive[i] and any(all(positive[j] for j in mono) for _, mono in poly):
                positive[i] = True
                changed = True
    return [not p for p in positive]


def _strip_zero(pps: Pps, zero: Sequence[bool]) -> list[Polynomial]:
    return [tuple((c, mono) for c, mono in poly if not any(zero[j] for j in mono))
            for poly in pps.equations]


def _one_mask(pps: Pps, zero: Sequence[bool]) -> list[bool]:
    g = _strip_zero(pps, zero)
    live = [i for i in range(len(pps)) if not zero[i]]
    deps = {i: {j for _, mono in g[i] for j in mono} for i in live}
    below_one = set(zero_index for zero_index in range(len(pps)) if zero[zero_index])
    for comp in strongly_connected_components(live, deps):
        members = set(comp)
        leaks = any(sum((c for c, _ in g[i]), ZERO) < 1 for i in comp)
        inherited = any(j in below_one for i in comp for j in deps[i] - members)
        if leaks or inherited:
            below_one |= members
            continue
        nontrivial = len(comp) > 1 or comp[0] in deps[comp[0]]
        if nontrivial:
            ones = [ONE] * len(pps)
            sub = Pps(pps.variables, tuple(g))
            J = sub.jacobian(ones, rows=comp, cols=comp)
            if not spectral_radius_le_one(J):
                below_one |= members
    return [i not in below_one for i in range(len(pps))]


def decide_one(pps: Pps) -> list[bool]:
    """``True`` exactly at the components whose LFP value is 1 (AF-shaped systems)."""
    for i, poly in enumerate(pps.equations):
        if poly != ((ONE, ()),) and sum((c for c, _ in poly), ZERO) != 1:
            raise NotAfShapeError(i)
    return _one_mask(pps, decide_zero(pps))


def spectral_radius_le_one(J: Sequence[Sequence]) -> bool:
    """Exact test of ``rho(J) <= 1`` for an irreducible nonnegative matrix.

    Decided as feasibility of ``v >= 1, J v <= v`` over the rationals.
    """
    n = len(J)
    J = [[Fraction(v) for v in row] for row in J]
    if any(len(row) != n for row in J):
        raise ValueError("matrix must be square")
    if any(v < 0 for row in J for v in row):
        raise ValueError("matrix must be nonnegative")
    if n == 0:
        return True
    if n > 1:
        edges = {i: [j for j in range(n) if J[i][j] > 0] for i in range(n)}
        if len(strongly_connected_components(range(n), edges)) != 1:
            raise NotIrreducibleError("matrix is not irreducible")
    # v = 1 + w, w >= 0:  (J - I) w <= 1 - J 1
    A = [[J[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    b = [1 - sum(J[i]) for i in range(n)]
    return feasible_point(A, b) is not None


# -- certificates ----------------------------------------------------------------


@dataclass(frozen=True)
class UpperCertificate:
    ok: bool
    vector: tuple
    violated: int | None = None

    def __bool__(self):
        return self.ok


def certify_upper(pps: Pps, candidate: Sequence) -> UpperCertificate:
    """Check ``f(candidate) <= candidate`` exactly; success implies ``candidate >= LFP``."""
    v = [Fraction(c) for c in candidate]
    if any(c < 0 for c in v):
        raise ValueError("candidate must be nonnegative")
    for i, value in enumerate(pps.evaluate(v)):
        if value > v[i]:
            return UpperCertificate(False, tuple(v), i)
    return UpperCertificate(True, tuple(v))


def _contraction_witness(J: Sequence[Sequence[Fraction]], guess: Sequence[Fraction]) -> bool:
    """True if some ``w > 0`` with ``J w < w`` is found (so rho(J) < 1)."""
    n = len(J)
    if n == 0:
        return True

    def strict(w):
        return all(w[i] > 0 and sum(J[i][j] * w[j] for j in range(n)) < w[i] for i in range(n))

    if guess is not None and strict(guess):
        return True
    # exact fallback: rho(J) < 1  <=>  (I - J) w = 1 has a solution w >= 1
    A = [[(1 if i == j else 0) - J[i][j] for j in range(n)] + [ONE] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col] != 0), None)
        if pivot is None:
            return False
        A[col], A[pivot] = A[pivot], A[col]
        p = A[col][col]
        A[col] = [v / p for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    w = [A[i][n] for i in range(n)]
    return all(v >= 1 for v in w) and strict(w)


# -- multiprecision helpers ------------------------------------------------------


def _to_fraction(x) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    man, exp = int(man), int(exp)  # mpmath may hand back gmpy2 integers
    if man == 0:
        return ZERO
    return Fraction(man * (1 << exp)) if exp >= 0 else Fraction(man, 1 << -exp)


def _to_mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


class _MpSystem:
    """Evaluation of a Pps in mpmath at the ambient working precision."""

    def __init__(self, pps: Pps):
        self.pps = pps
        self.eqs = [[(_to_mp(c), mono) for c, mono in poly] for poly in pps.equations]

    def evaluate(self, x, rows):
        out = []
        for i in rows:
            total = mpmath.mpf(0)
            for c, mono in self.eqs[i]:
                term = c
                for j in mono:
                    term *= x[j]
                total += term
            out.append(total)
        return out

    def jacobian(self, x, rows, cols):
        pos = {j: k for k, j in enumerate(cols)}
        J = mpmath.zeros(len(rows), len(cols))
        for r, i in enumerate(rows):
            for c, mono in self.eqs[i]:
                for p, j in enumerate(mono):
                    if j in pos:
                        term = c
                        for q, jj in enumerate(mono):
                            if q != p:
                                term *= x[jj]
                        J[r, pos[j]] += term
        return J


def _approximate_lfp(mp: _MpSystem, budget: list) -> list:
    """Least fixed point of a system with all components in (0, 1), per SCC, by Newton."""
    pps = mp.pps
    n = len(pps)
    x = [mpmath.mpf(0)] * n
    tol = mpmath.ldexp(1, -mpmath.mp.prec + 6)
    for comp in strongly_connected_components(range(n), pps.dependency_graph()):
        if len(comp) == 1 and comp[0] not in pps.dependencies(comp[0]):
            x[comp[0]] = mp.evaluate(x, comp)[0]
            continue
        for _ in range(200):
            budget[0] -= 1
            fx = mp.evaluate(x, comp)
            J = mp.jacobian(x, comp, comp)
            A = mpmath.eye(len(comp)) - J
            rhs = mpmath.matrix([fx[k] - x[i] for k, i in enumerate(comp)])
            try:
                d = mpmath.lu_solve(A, rhs)
            except ZeroDivisionError:
                d = rhs  # singular Jacobian: take a Kleene step
            step = max(abs(d[k]) for k in range(len(comp)))
            for k, i in enumerate(comp):
                x[i] = min(max(x[i] + d[k], mpmath.mpf(0)), mpmath.mpf(1))
            if step <= tol:
                break
    return x


def _leq(a: Sequence, b: Sequence) -> bool:
    return all(p <= q for p, q in zip(a, b))


@dataclass
class _Bounds:
    """Certified bounds for a reduced system (all LFP components in (0, 1))."""

    lower: list
    upper: list
    approx: list
    precision: int


def _certified_bounds(R: Pps, epsilon: Fraction, precision: int, budget: list,
                      lower_steps: int | None = None) -> _Bounds | None:
    n = len(R)
    if n == 0:
        return _Bounds([], [], [], precision)
    with mpmath.workprec(precision):
        mp = _MpSystem(R)
        q = _approximate_lfp(mp, budget)
        rows = list(range(n))
        J = mp.jacobian(q, rows, rows)
        try:
            v = mpmath.lu_solve(mpmath.eye(n) - J, mpmath.matrix([1] * n))
        except ZeroDivisionError:
            return None
        v = [abs(v[i]) + mpmath.ldexp(1, -precision // 2) for i in range(n)]
        v_frac = [_to_fraction(vi) for vi in v]
        q_frac = [_to_fraction(qi) for qi in q]

        upper = None
        etas = [Fraction(1, 1 << (precision - 12)), Fraction(1, 1 << (precision // 2))]
        for eta in etas:
            cand = [min(ONE, qi + eta * vi) for qi, vi in zip(q_frac, v_frac)]
            if not certify_upper(R, cand):
                continue
            if _contraction_witness(R.jacobian(cand), v_frac):
                upper = cand
                break
        if upper is None:
            return None

        def certified(z):
            return all(zi >= 0 for zi in z) and _leq(z, upper) and _leq(z, R.evaluate(z))

        # Newton/Kleene lower iteration from 0
        x = [ZERO] * n
        steps = 0
        while budget[0] > 0 and (lower_steps is None or steps < lower_steps):
            budget[0] -= 1
            steps += 1
            kx = R.evaluate(x)
            xm = [_to_mp(xi) for xi in x]
            A = mpmath.eye(n) - mp.jacobian(xm, rows, rows)
            rhs = mpmath.matrix([_to_mp(kx[i] - x[i]) for i in range(n)])
            cand = None
            try:
                d = mpmath.lu_solve(A, rhs)
                raw = [_to_fraction(xm[i] + d[i]) for i in range(n)]
                for eta in [ZERO] + etas:
                    c = [max(ZERO, min(ri - eta * vi, upper[i]))
                         for i, (ri, vi) in enumerate(zip(raw, v_frac))]
                    if certified(c):
                        cand = c
                        break
            except ZeroDivisionError:
                pass
            new = kx if cand is None else [max(a, b) for a, b in zip(cand, kx)]
            stalled = new == x
            x = new
            if max(u - l for u, l in zip(upper, x)) <= epsilon or stalled:
                break
            if cand is None and max(u - l for u, l in zip(upper, x)) > epsilon:
                # Kleene steps alone only help when close; look for a certified
                # point just below the approximation instead.
                for eta in etas:
                    z = [max(ZERO, qi - eta * vi) for qi, vi in zip(q_frac, v_frac)]
                    if certified(z):
                        x = [max(a, b) for a, b in zip(x, z)]
                        break
        return _Bounds(x, upper, q_frac, precision)


# -- solver ------------------------------------------------------------------------


class FixedPointSolver:
    """Caches the qualitative analysis and certified bounds of one system.

    ``numeric_runs`` counts calls into the numeric enclosure machinery, so
    callers can tell whether an answer came from the qualitative path.
    """

    def __init__(self, pps: Pps, settings: SolverSettings = DEFAULT_SETTINGS):
        pps.check_feasible()
        self.pps = pps
        self.settings = settings
        self.zero = decide_zero(pps)
        self.one = _one_mask(pps, self.zero)
        self.undecided = [i for i in range(len(pps)) if not (self.zero[i] or self.one[i])]
        self._pos = {i: k for k, i in enumerate(self.undecided)}
        self.reduced = self._reduce()
        self.numeric_runs = 0
        self._bounds: _Bounds | None = None
        self._budget = [settings.max_iterations]

    def _reduce(self) -> Pps:
        eqs = []
        for i in self.undecided:
            terms = []
            for c, mono in self.pps.equations[i]:
                if any(self.zero[j] for j in mono):
                    continue
                terms.append((c, tuple(self._pos[j] for j in mono if not self.one[j])))
            eqs.append(tuple(terms))
        return Pps(tuple(self.pps.variables[i] for i in self.undecided), tuple(eqs))

    def is_qualitative(self, i: int) -> bool:
        return self.zero[i] or self.one[i]

    def exact_decided(self, i: int) -> Fraction | None:
        if self.zero[i]:
            return ZERO
        if self.one[i]:
            return ONE
        return None

    def _solve(self, epsilon: Fraction, min_precision: int = 0) -> _Bounds:
        b = self._bounds
        if b is not None and b.precision >= min_precision and (
                not b.lower or max(u - l for u, l in zip(b.upper, b.lower)) <= epsilon):
            return b
        self.numeric_runs += 1
        for precision in _PRECISIONS:
            if precision < min_precision:
                continue
            if self._budget[0] <= 0:
                break
            b = _certified_bounds(self.reduced, epsilon, precision, self._budget)
            if b is not None and (not b.lower or
                                  max(u - l for u, l in zip(b.upper, b.lower)) <= epsilon):
                self._bounds = b
                return b
        raise PrecisionExhaustedError(
            f"could not certify an enclosure of width {float(epsilon):.3g} within budget",
            self._partial(b))

    def _partial(self, b):
        if b is None:
            return None
        out = []
        for i in range(len(self.pps)):
            exact = self.exact_decided(i)
            if exact is not None:
                out.append(Enclosure.point(exact))
            else:
                k = self._pos[i]
                out.append(Enclosure(b.lower[k], b.upper[k]))
        return out

    def enclosures(self, epsilon: Fraction | None = None) -> list[Enclosure]:
        epsilon = self.settings.epsilon if epsilon is None else Fraction(epsilon)
        b = self._solve(epsilon) if self.undecided else None
        return self._partial(b) if b is not None else [
            Enclosure.point(self.exact_decided(i)) for i in range(len(self.pps))]

    def enclosure(self, i: int, epsilon: Fraction | None = None) -> Enclosure:
        exact = self.exact_decided(i)
        if exact is not None:
            return Enclosure.point(exact)
        return self.enclosures(epsilon)[i]

    def reconstruct(self, b: _Bounds) -> list | None:
        """Small-denominator rational fixed point within the certified region, if any."""
        R = self.reduced
        y = []
        for lo, up in zip(b.lower, b.upper):
            y.append(((lo + up) / 2).limit_denominator(self.settings.max_denominator))
        if all(0 <= yi for yi in y) and _leq(y, b.upper) and R.evaluate(y) == y:
            return y
        return None

    def exact_value(self, i: int) -> Fraction | None:
        """The exact LFP component when it is 0, 1, or a reconstructible rational."""
        exact = self.exact_decided(i)
        if exact is not None:
            return exact
        for round_ in range(self.settings.max_refinements + 1):
            try:
                b = self._solve(self.settings.epsilon / (1 << (32 * round_)),
                                _PRECISIONS[min(round_, len(_PRECISIONS) - 1)])
            except PrecisionExhaustedError:
                return None
            y = self.reconstruct(b)
            if y is not None:
                return y[self._pos[i]]
        return None

    def compare(self, i: int, op: str, tau) -> tuple[bool | None, Enclosure, str]:
        """Three-valued ``LFP_i op tau`` with the final enclosure and the deciding method."""
        tau = Fraction(tau)
        if op not in OPS:
            raise ValueError(f"unknown comparison {op!r}")
        if not 0 <= tau <= 1:
            raise ValueError("threshold must lie in [0, 1]")
        exact = self.exact_decided(i)
        if exact is not None:
            return holds(exact, op, tau), Enclosure.point(exact), "qualitative"
        # the LFP component lies strictly between 0 and 1
        if tau == 0:
            return op in (">=", ">"), self._cheap_enclosure(i), "qualitative"
        if tau == 1:
            return op in ("<", "<="), self._cheap_enclosure(i), "qualitative"
        enc = None
        for round_ in range(self.settings.max_refinements + 1):
            try:
                b = self._solve(self.settings.epsilon / (1 << (32 * round_)),
                                _PRECISIONS[min(round_, len(_PRECISIONS) - 1)])
            except PrecisionExhaustedError:
                break
            k = self._pos[i]
            enc = Enclosure(b.lower[k], b.upper[k])
            if enc.lower > tau or enc.upper < tau:
                return holds(enc.lower, op, tau), enc, "enclosure"
            y = self.reconstruct(b)
            if y is not None:
                return holds(y[k], op, tau), Enclosure.point(y[k]), "exact"
        if enc is None:
            enc = Enclosure(ZERO, ONE)
        return None, enc, "unknown"

    def _cheap_enclosure(self, i: int) -> Enclosure:
        return Enclosure(ZERO, ONE) if self._bounds is None else self.enclosures()[i]


def newton(pps: Pps, epsilon=None, settings: SolverSettings = DEFAULT_SETTINGS) -> list[Enclosure]:
    """Certified enclosures of every LFP component, of width at most ``epsilon``.

    Components equal to 0 or 1 are reported exactly.
    """
    return FixedPointSolver(pps, settings).enclosures(epsilon)


def newton_lower_iterates(pps: Pps, n: int, settings: SolverSettings = DEFAULT_SETTINGS):
    """Lower bounds after ``n`` Newton rounds (exact 0/1 on decided components)."""
    solver = FixedPointSolver(pps, settings)
    R = solver.reduced
    result = [solver.exact_decided(i) for i in range(len(pps))]
    if solver.undecided:
        b = _certified_bounds(R, ZERO, _PRECISIONS[0], [settings.max_iterations], lower_steps=n)
        if b is None:
            raise PrecisionExhaustedError("no upper certificate at base precision")
        for k, i in enumerate(solver.undecided):
            result[i] = b.lower[k]
    return result


def compare(pps: Pps, i: int, op: str, tau, settings: SolverSettings = DEFAULT_SETTINGS):
    """``True``/``False`` when ``LFP_i op tau`` is proven, ``None`` when undecided."""
    return FixedPointSolver(pps, settings).compare(i, op, tau)[0]
