from fractions import Fraction

import pytest

from bpcheck.errors import PreconditionViolatedError, UndecidedError, UnknownAtomError
from bpcheck.pps import FixedPointSolver, build_af_pps
from bpcheck.process import BranchingProcess, parse_process, reachable_types
from bpcheck.pttl import (
    Checker,
    ag_to_af_targets,
    build_ar_product,
    build_au_product,
    parse_formula,
    prob_ax,
    prob_ex,
    sat_set,
)
from bpcheck.pttl.checker import DONE, FAIL, PENDING
from bpcheck.sampling import estimate_af

F = Fraction


def check(bp, text):
    return sat_set(bp, parse_formula(text))


def test_af_threshold(intro):
    assert check(intro, "[ true AU d ]>=2/3") == {"I": False, "B": True, "D": True}
    assert check(intro, "[ AX true ]>=1") == {"I": True, "B": True, "D": True}
    assert check(intro, "![ true AU d ]>0")["I"] is True


def test_qualitative_formula_needs_no_numerics(intro):
    c = Checker(intro)
    assert c.sat(parse_formula("[ true AU d ]>0")) == {"I": False, "B": True, "D": True}
    assert c.numeric_runs == 0


def test_prob_ax(intro):
    sat_i = {x: x == "I" for x in intro.types}
    assert prob_ax(intro, sat_i, "I") == F(9, 10)
    for x in intro.types:
        assert prob_ax(intro, dict.fromkeys(intro.types, True), x) == 1
        assert prob_ax(intro, dict.fromkeys(intro.types, False), x) == 0
    assert prob_ex(intro, {x: x == "B" for x in intro.types}, "I") == F(1, 10)


def test_au_product_trivial_cases(intro):
    yes, no = dict.fromkeys(intro.types, True), dict.fromkeys(intro.types, False)
    sp, targets = build_au_product(intro, no, yes)
    assert set(sp.status.values()) == {DONE}
    sp, targets = build_au_product(intro, no, no)
    assert set(sp.status.values()) == {FAIL}
    solver = FixedPointSolver(build_af_pps(sp.process, targets))
    assert all(solver.exact_value(solver.pps.index(sp.start(x))) == 0 for x in intro.types)
    assert len(sp.process.types) == 9 and len(sp.process.rules) == 18


def test_true_au_matches_direct_af(intro):
    sat_d = {x: x == "D" for x in intro.types}
    sp, targets = build_au_product(intro, dict.fromkeys(intro.types, True), sat_d)
    assert sp.start("B") == ("B", PENDING)
    solver = FixedPointSolver(build_af_pps(sp.process, targets))
    assert solver.exact_value(solver.pps.index(("B", PENDING))) == F(2, 3)


def test_ag_not_d_has_no_reachable_good_type(intro):
    never = dict.fromkeys(intro.types, False)
    sp, safe = build_ar_product(intro, never, {x: x != "D" for x in intro.types})
    good = ag_to_af_targets(sp.process, safe)
    assert good == {(x, DONE) for x in intro.types}
    for x in intro.types:
        assert not reachable_types(sp.process, sp.start(x)) & good


def test_ar_product(intro):
    yes, no = dict.fromkeys(intro.types, True), dict.fromkeys(intro.types, False)
    sp, safe = build_ar_product(intro, yes, yes)
    assert set(sp.status.values()) == {DONE}
    assert ag_to_af_targets(sp.process, safe) >= {sp.start(x) for x in intro.types}
    sp, safe = build_ar_product(intro, yes, no)
    assert set(sp.status.values()) == {FAIL}


def test_ag_not_d(intro):
    not_d = {x: x != "D" for x in intro.types}
    sp, safe = build_ar_product(intro, dict.fromkeys(intro.types, False), not_d)
    g = ag_to_af_targets(sp.process, safe)
    # only the absorbing status-1 copies survive, and none is reachable from a start
    assert all(s == DONE for _, s in g)
    for x in intro.types:
        assert g.isdisjoint(reachable_types(sp.process, sp.start(x)))
    assert check(intro, "[ AG !d ]>0") == {"I": False, "B": False, "D": False}


def test_eg_not_d(intro):
    # the leftmost branch from I is I forever, so EG !d holds surely at I
    result = check(intro, "[ false ER !d ]>0")
    assert result == {"I": True, "B": True, "D": False}
    assert check(intro, "[ EG !d ]>=1")["I"] is True
    # Monte Carlo cross-check at B: Pr[EG !d] = 1 - Pr[AF d] = 1/3
    est = estimate_af(intro, "B", {"D"}, depth=60, n=5000, seed=4)
    assert abs((1 - est.point) - F(1, 3)) <= est.half_width + F(2, 100)


def test_ag_to_af_edge_cases(intro):
    assert ag_to_af_targets(intro, set(intro.types)) == set(intro.types)
    assert ag_to_af_targets(intro, set()) == set()
    with pytest.raises(PreconditionViolatedError) as info:
        ag_to_af_targets(intro, {"B"})
    assert info.value.witness[0] == "I" and info.value.witness[-1] == "B"


def test_status_absorption(intro):
    sat_b = {x: x == "B" for x in intro.types}
    sat_d = {x: x == "D" for x in intro.types}
    for build in (build_au_product, build_ar_product):
        sp, _ = build(intro, sat_b, sat_d)
        for x in intro.types:
            for s in (FAIL, DONE):
                assert {t[1] for t in reachable_types(sp.process, (x, s))} == {s}


def test_unknown_atom(intro):
    with pytest.raises(UnknownAtomError):
        check(intro, "[ AX zz ]>0")


def test_undecided_threshold_raises():
    n = 10**7 + 19
    a = 1 / (F(1, n) + 2)
    b = a * F(2, n)
    bp = BranchingProcess.from_rules(
        [("X", a, ("X", "X")), ("X", b, ("D",)), ("X", 1 - a - b, ("Z",)),
         ("D", 1, ("D",)), ("Z", 1, ("Z",))], labels={"D": {"d"}})
    with pytest.raises(UndecidedError) as info:
        check(bp, f"[ true AU d ]>=1/{n}")
    assert info.value.type == "X"
    assert F(1, n) in info.value.enclosure
    # the same system decides thresholds that are not hit exactly
    assert check(bp, f"[ true AU d ]>=1/{n + 5000}")["X"] is True


def test_mirror_on_duals(intro):
    # EX b at I has probability 1/10; test all comparisons through the dual route
    for op, expected in (("<", False), ("<=", True), (">=", True), (">", False)):
        assert check(intro, f"[ EX b ]{op}1/10")["I"] is expected
        assert check(intro, f"[ false EU b ]{op}0")["I"] is (op in ("<=", ">="))


def test_nested_formula(intro):
    phi = "[ AX [ true AU d ]>0 ]>=9/10"
    # children of I: I (prob 9/10) fails the inner formula
    assert check(intro, phi) == {"I": False, "B": True, "D": True}


def test_parsed_labels_drive_atoms():
    # x = 1/3 + 2/3 x^2 has roots 1/2 and 1
    bp = parse_process("types: A B\nrule A -> 1/3 : B\nrule A -> 2/3 : A A\n"
                       "rule B -> 1 : B\nlabel B : goal\n")
    assert check(bp, "[ AF goal ]>=1") == {"A": False, "B": True}
    assert check(bp, "[ AF goal ]<=1/2") == {"A": True, "B": False}
    assert check(bp, "[ EF goal ]>=1") == {"A": True, "B": True}
