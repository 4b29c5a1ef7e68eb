import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bpcheck.errors import (
    EmptySuccessorError,
    FormatError,
    InvalidPrefixError,
    NonPositiveProbabilityError,
    NotGeneratedError,
    ProbabilitySumError,
    UnknownTypeError,
)
from bpcheck.process import (
    BranchingProcess,
    Rule,
    TreePrefix,
    as_fraction,
    format_process,
    parse_process,
    prefix_probability,
    reachable_types,
    validate,
)

from corpus import CORPUS

FIGURE_PREFIX = ("I", [("I", [("I", ["I", "B"])]),
                       ("B", [("B", ["B"]), ("B", ["D"])])])


def test_intro_parses_exactly(intro):
    assert intro.types == ("I", "B", "D")
    assert Rule("I", Fraction(9, 10), ("I",)) in intro.rules
    assert intro.max_arity == 2
    assert intro.label("B") == {"b"}
    assert intro.colours == {"I": 2, "B": 1, "D": 2}
    validate(intro)


def test_identity_loop_is_valid():
    validate(BranchingProcess.from_rules([("X", 1, ("X",))]))


def test_sum_error_names_type():
    bp = BranchingProcess.from_rules([("B", Fraction(1, 2), ("B",)),
                                      ("B", Fraction(2, 5), ("B", "B"))])
    with pytest.raises(ProbabilitySumError) as info:
        validate(bp)
    assert info.value.type == "B"
    assert "B" in str(info.value)


def test_other_invariants():
    with pytest.raises(EmptySuccessorError):
        validate(BranchingProcess.from_rules([("X", 1, ())], types=["X"]))
    with pytest.raises(NonPositiveProbabilityError):
        validate(BranchingProcess.from_rules([("X", 1, ("X",)), ("X", 0, ("X", "X"))]))
    with pytest.raises(UnknownTypeError):
        validate(BranchingProcess(("X",), (("X", 1, ("Y",)),)))


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        as_fraction(0.1)


def test_reachable(intro, running):
    assert reachable_types(intro, "I") == {"I", "B", "D"}
    assert reachable_types(intro, "D") == {"D"}
    assert reachable_types(running, "3") == {"1", "3", "4"}
    with pytest.raises(UnknownTypeError):
        reachable_types(intro, "Q")


def test_reachable_monotone_under_added_rules():
    for bp in CORPUS[:50]:
        x, y = bp.types[0], bp.types[-1]
        # add a rule by splitting the first rule of x
        first = bp.rules_of(x)[0]
        extra = (x, first.probability / 2, (y,) * 3)
        rules = [r if r is not first else (x, first.probability / 2, first.successors)
                 for r in bp.rules] + [extra]
        bigger = BranchingProcess(bp.types, tuple(rules))
        for t in bp.types:
            assert reachable_types(bp, t) <= reachable_types(bigger, t)


def test_figure_prefix_probability(intro):
    t = TreePrefix.from_nested(FIGURE_PREFIX)
    assert t.nodes == {(), (1,), (1, 1), (1, 1, 1), (1, 1, 2), (2,), (2, 1), (2, 1, 1),
                       (2, 2), (2, 2, 1)}
    assert t.successor_word((1, 1)) == ("I", "B")
    assert prefix_probability(intro, t) == Fraction(27, 100000)


def test_small_prefixes(intro):
    assert prefix_probability(intro, TreePrefix.from_nested("I")) == 1
    assert prefix_probability(intro, TreePrefix.from_nested(("B", ["B", "B"]))) == Fraction(3, 10)
    with pytest.raises(NotGeneratedError):
        prefix_probability(intro, TreePrefix.from_nested(("B", ["I"])))


def test_prefix_shape_is_checked():
    with pytest.raises(InvalidPrefixError):
        TreePrefix(frozenset({(), (2,)}), {(): "I", (2,): "I"}, {(): 2, (2,): 0})


def _all_prefixes(bp, start, depth):
    """Every depth-``depth`` full prefix, as nested tuples."""
    if depth == 0:
        return [start]
    out = []
    for r in bp.rules_of(start):
        for kids in itertools.product(*[_all_prefixes(bp, y, depth - 1) for y in r.successors]):
            out.append((start, list(kids)))
    return out


def test_prefix_probabilities_sum_to_one():
    small = [bp for bp in CORPUS if len(bp.types) <= 3 and bp.max_arity <= 2][:15]
    assert small
    for bp in small:
        for depth in range(4):
            prefixes = _all_prefixes(bp, bp.types[0], depth)
            if len(prefixes) > 5000:
                break
            total = sum(prefix_probability(bp, TreePrefix.from_nested(p)) for p in prefixes)
            assert total == 1


@given(st.integers(0, len(CORPUS) - 1), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_one_level_extension_composes(k, salt):
    bp = CORPUS[k]
    x = bp.types[salt % len(bp.types)]
    r = bp.rules_of(x)[salt % len(bp.rules_of(x))]
    y = r.successors[0]
    r2 = bp.rules_of(y)[(salt // 7) % len(bp.rules_of(y))]
    parent = (x, list(r.successors))
    child = (x, [(y, list(r2.successors))] + list(r.successors[1:]))
    p_parent = prefix_probability(bp, TreePrefix.from_nested(parent))
    p_child = prefix_probability(bp, TreePrefix.from_nested(child))
    assert p_child == p_parent * r2.probability


@given(st.integers(0, len(CORPUS) - 1), st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_perturbing_one_probability_breaks_validity(k, salt):
    bp = CORPUS[k]
    i = salt % len(bp.rules)
    delta = Fraction(1, 1000 + salt % 97)
    rules = list(bp.rules)
    r = rules[i]
    rules[i] = Rule(r.source, r.probability + delta, r.successors)
    with pytest.raises(ProbabilitySumError):
        validate(BranchingProcess(bp.types, tuple(rules)))


def test_format_round_trip(intro):
    again = parse_process(format_process(intro))
    assert again.rules == intro.rules
    assert again.labels == intro.labels
    assert again.colours == intro.colours


def test_parse_errors_carry_location():
    with pytest.raises(FormatError) as info:
        parse_process("types: A\nrule A -> 1 A\n", source="bad.bp")
    assert info.value.line == 2 and info.value.source == "bad.bp"
    with pytest.raises(ProbabilitySumError) as info:
        parse_process("types: A\n\nrule A -> 1/2 : A\n", source="sum.bp")
    assert info.value.line == 3
    with pytest.raises(FormatError):
        parse_process("rule A -> 1 : A\n")
    with pytest.raises(FormatError):
        parse_process("types: A\nrule A -> 1 : A\ncolour A : -1\n")


def test_decimal_literals_are_exact():
    bp = parse_process("types: A B\nrule A -> 0.1 : B\nrule A -> 0.9 : A\nrule B -> 1 : B\n")
    assert bp.rules[0].probability == Fraction(1, 10)
