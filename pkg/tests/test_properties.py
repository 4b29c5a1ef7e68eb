"""Corpus-wide property checks over at least 200 random valid processes."""

import random
from collections import Counter
from fractions import Fraction

from bpcheck.graph import reachable
from bpcheck.parity import Dpta, product
from bpcheck.pps import FixedPointSolver, build_af_pps, kleene, newton_lower_iterates
from bpcheck.process import reachable_types, validate
from bpcheck.pttl import Checker
from bpcheck.pttl.checker import DONE, FAIL, build_ar_product, build_au_product
from bpcheck.pttl.syntax import AR, AU, AX, ER, EU, EX, MIRROR, Atom, Not, Prob, TrueF

from corpus import CORPUS, float_kleene, float_newton, random_targets

F = Fraction


def test_corpus_shape():
    assert len(CORPUS) >= 200
    assert all(len(bp.types) <= 6 and bp.max_arity <= 3 for bp in CORPUS)
    for bp in CORPUS:
        validate(bp)


def _systems(seed):
    rng = random.Random(seed)
    for bp in CORPUS:
        yield bp, build_af_pps(bp, random_targets(rng, bp))


def test_kleene_monotone():
    for _, pps in _systems(1):
        seq = [kleene(pps, k) for k in range(5)]
        for a, b in zip(seq, seq[1:]):
            assert all(x <= y for x, y in zip(a, b))
        rounded = [kleene(pps, k, round_bits=64) for k in (10, 20, 40)]
        for a, b in zip(rounded, rounded[1:]):
            assert all(x <= y <= 1 for x, y in zip(a, b))


def test_newton_dominates_kleene():
    for _, pps in _systems(2):
        solver = FixedPointSolver(pps)
        enc = solver.enclosures()
        prev = None
        for n in (1, 2, 4):
            lows = newton_lower_iterates(pps, n)
            k = kleene(pps, n)
            assert all(lo >= kl for lo, kl in zip(lows, k))
            assert all(lo <= e.upper for lo, e in zip(lows, enc))
            if prev is not None:
                assert all(a <= b for a, b in zip(prev, lows))
            prev = lows


def test_qualitative_deciders_match_numeric_oracle():
    tol = 1e-6
    undecided = 0
    for _, pps in _systems(3):
        solver = FixedPointSolver(pps)
        enc = solver.enclosures()
        positive = float_kleene(pps, len(pps) + 1)
        oracle = float_newton(pps)
        for i in range(len(pps)):
            assert solver.zero[i] == (positive[i] == 0)
            if solver.one[i]:
                assert oracle[i] >= 1 - tol
            elif not solver.zero[i]:
                undecided += 1
                assert tol < oracle[i] < 1 - tol
                assert float(enc[i].lower) - tol <= oracle[i] <= float(enc[i].upper) + tol
    assert undecided >= 50  # the corpus exercises the numeric path


def test_target_monotonicity():
    rng = random.Random(4)
    for bp in CORPUS:
        small = random_targets(rng, bp)
        big = small | {rng.choice(bp.types)}
        a = FixedPointSolver(build_af_pps(bp, small))
        b = FixedPointSolver(build_af_pps(bp, big))
        ea, eb = a.enclosures(), b.enclosures()
        for i in range(len(bp.types)):
            assert ea[i].lower <= eb[i].upper
            assert not b.zero[i] or a.zero[i]
            assert not a.one[i] or b.one[i]


def _random_dpta(rng, bp):
    states = tuple(f"q{i}" for i in range(rng.randint(1, 3)))
    table = {}
    for q in states:
        for x in bp.types:
            for n in range(1, bp.max_arity + 1):
                table[(q, x, n)] = tuple(rng.choice(states) for _ in range(n))
    colours = {q: rng.randint(0, 3) for q in states}
    return Dpta(states, bp.types, states[0], table, colours, bp.max_arity)


def test_product_preserves_probabilities():
    rng = random.Random(5)
    for bp in CORPUS:
        aut = _random_dpta(rng, bp)
        cbp = product(bp, aut)
        validate(cbp)
        for t in cbp.types:
            assert sum(r.probability for r in cbp.rules_of(t)) == 1
        projected = Counter((r.source[0], r.probability, tuple(y for y, _ in r.successors))
                            for r in cbp.rules)
        assert projected == Counter({r: len(aut.states) for r in bp.rules})


BOUNDS = (F(0), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(1))
STATE = (Atom("a"), Atom("b"), TrueF(), Not(Atom("a")))


def test_duality_coherence():
    rng = random.Random(6)
    for bp in CORPUS:
        checker = Checker(bp)
        phi, psi = rng.choice(STATE), rng.choice(STATE)
        for op in MIRROR:
            r = rng.choice(BOUNDS)
            _check_duals(checker, phi, psi, op, r)


def _check_duals(checker, phi, psi, op, r):
    # the path negation moves into the threshold: [!p] op r  iff  [p] mirror(op) 1-r
    pairs = [
        (Prob(EX(phi), op, r), Prob(AX(Not(phi)), MIRROR[op], 1 - r)),
        (Prob(EU(phi, psi), op, r), Prob(AR(Not(phi), Not(psi)), MIRROR[op], 1 - r)),
        (Prob(ER(phi, psi), op, r), Prob(AU(Not(phi), Not(psi)), MIRROR[op], 1 - r)),
    ]
    for direct, rewritten in pairs:
        assert checker.sat(direct) == checker.sat(rewritten)


def test_eu_positive_matches_path_search():
    rng = random.Random(7)
    for bp in CORPUS:
        checker = Checker(bp)
        phi, psi = rng.choice(STATE), rng.choice(STATE)
        sat_phi, sat_psi = checker.sat(phi), checker.sat(psi)
        # a finite phi-path into psi exists iff Pr[phi EU psi] > 0
        graph = {x: (succ if sat_phi[x] and not sat_psi[x] else set())
                 for x, succ in bp.successor_graph().items()}
        expected = {x: any(sat_psi[y] for y in reachable(graph, [x])) for x in bp.types}
        assert checker.sat(Prob(EU(phi, psi), ">", 0)) == expected


def test_status_absorption():
    rng = random.Random(8)
    for bp in CORPUS:
        sat_phi = {x: rng.random() < 0.5 for x in bp.types}
        sat_psi = {x: rng.random() < 0.5 for x in bp.types}
        for build in (build_au_product, build_ar_product):
            sp, _ = build(bp, sat_phi, sat_psi)
            for x in bp.types:
                for s in (FAIL, DONE):
                    assert {t[1] for t in reachable_types(sp.process, (x, s))} == {s}
