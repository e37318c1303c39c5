import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tracelogic.automaton import random_automaton
from tracelogic.branching import Weighting
from tracelogic.logic import (
    TICK,
    ZERO,
    Diam,
    FormulaSyntaxError,
    Join,
    Scale,
    apply_axiom_once,
    axiom_redexes,
    depth,
    distinguish,
    evaluate,
    format_formula,
    format_normal_form,
    normal_form,
    pairing,
    parse_formula,
    random_formula,
    refute,
)
from tracelogic.semiring import BOOLEAN, MINPLUS, NAT, RATIONAL
from tracelogic.trace import equiv_bounded, tr

from conftest import ALL_SEMIRINGS, corpus

F = Fraction
BIFURCATION_L = "<a>(<b>end + <c>end)"
BIFURCATION_R = "<a><b>end + <a><c>end"


def test_parse_examples():
    assert parse_formula(BIFURCATION_L) == Diam("a", Join(Diam("b", TICK), Diam("c", TICK)))
    assert parse_formula("1/2 * <a>end", RATIONAL) == Scale(F(1, 2), Diam("a", TICK))
    with pytest.raises(FormulaSyntaxError):
        parse_formula("<a> 0 +")


def test_parse_precedence_and_associativity():
    assert parse_formula("1/2 * <a>end + end", RATIONAL) == Join(
        Scale(F(1, 2), Diam("a", TICK)), TICK)
    assert parse_formula("end + 0 + end") == Join(Join(TICK, ZERO), TICK)
    assert parse_formula("<a> 2 * end", NAT) == Diam("a", Scale(2, TICK))
    assert parse_formula("0 * end", NAT) == Scale(0, TICK)
    assert parse_formula("inf * end", MINPLUS) == Scale(float("inf"), TICK)


@pytest.mark.parametrize("text, pos", [
    ("<a>end & <b>end", 7),
    ("~<a>end", 0),
    ("not end", 0),
    ("end end", 4),
    ("(end", 4),
    ("1/2 end", 0),
    ("<a>", 3),
])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text, RATIONAL)
    assert info.value.pos == pos


def test_scalar_needs_semiring():
    with pytest.raises(FormulaSyntaxError):
        parse_formula("2 * end")


def test_printer_minimal_parentheses():
    assert format_formula(parse_formula(BIFURCATION_L)) == BIFURCATION_L
    assert format_formula(parse_formula("(end + end) + end")) == "end + end + end"
    assert format_formula(parse_formula("end + (end + end)")) == "end + (end + end)"
    assert format_formula(parse_formula("1/2 * (<a>end + end)", RATIONAL), RATIONAL) == \
        "1/2 * (<a>end + end)"


@pytest.mark.parametrize("s", ALL_SEMIRINGS, ids=lambda s: s.name)
def test_print_parse_round_trip(s):
    rng = random.Random(s.name)
    for _ in range(300):
        f = random_formula(rng, s, "abc", rng.randint(0, 4))
        assert parse_formula(format_formula(f, s), s) == f


def test_depth_examples():
    assert depth(parse_formula("end")) == 0
    assert depth(parse_formula("<a><b>end")) == 2
    assert depth(parse_formula("<a>end + end")) == 1


def test_eval_examples(a1, a2):
    f = parse_formula(BIFURCATION_L)
    assert evaluate(a1, f, "x") is True
    assert evaluate(a1, f, "x2") is True
    assert evaluate(a2, parse_formula("<a>end"), "s0") == F(1, 2)
    for x in a1.states:
        assert evaluate(a1, ZERO, x) is False


def test_eval_errors(a1, a2):
    with pytest.raises(ValueError, match="unknown action"):
        evaluate(a1, parse_formula("<d>end"), "x")
    with pytest.raises(KeyError):
        evaluate(a1, TICK, "nowhere")
    with pytest.raises(ValueError, match="not an element"):
        evaluate(a1, Scale(F(1, 2), TICK), "x")


def satisfies(aut, f, x):
    """The four displayed clauses, evaluated directly on a boolean automaton."""
    if f == ZERO:
        return False
    if f == TICK:
        return aut.termination(x) is True
    if isinstance(f, Join):
        return satisfies(aut, f.left, x) or satisfies(aut, f.right, x)
    if isinstance(f, Diam):
        return any(a == f.action and satisfies(aut, f.body, y) for a, y, _ in aut.edges(x))
    if isinstance(f, Scale):
        return f.scalar and satisfies(aut, f.body, x)
    raise TypeError(f)


def test_boolean_eval_matches_satisfaction():
    rng = random.Random(17)
    for aut in corpus(BOOLEAN, 40, seed=5):
        for _ in range(10):
            f = random_formula(rng, BOOLEAN, aut.alphabet, rng.randint(0, 4))
            for x in aut.states:
                assert evaluate(aut, f, x) == satisfies(aut, f, x)


def test_normal_form_examples():
    left = normal_form(parse_formula(BIFURCATION_L), BOOLEAN)
    assert left == Weighting(BOOLEAN, {("a", "b"): True, ("a", "c"): True})
    assert left == normal_form(parse_formula(BIFURCATION_R), BOOLEAN)
    assert len(normal_form(parse_formula("<a>0"), NAT)) == 0
    twice = parse_formula("1/2 * <a>end + 1/2 * <a>end", RATIONAL)
    assert normal_form(twice, RATIONAL) == Weighting(RATIONAL, {("a",): F(1)})
    assert format_normal_form(left, "abc") == "{ab, ac}"


def test_apply_axiom_examples():
    assert apply_axiom_once(parse_formula("<a>0"), 0, BOOLEAN) in {
        ZERO, *[new for _, _, new in axiom_redexes(parse_formula("<a>0"), BOOLEAN)]}
    names = {name: new for path, name, new in axiom_redexes(parse_formula("<a>0"), BOOLEAN)
             if path == ()}
    assert names["diam-zero"] == ZERO
    phi = parse_formula("<b>end + 0")
    names = {name: new for path, name, new in axiom_redexes(phi, NAT) if path == ()}
    assert names["join-unit-right"] == parse_formula("<b>end")


@pytest.mark.parametrize("s", ALL_SEMIRINGS, ids=lambda s: s.name)
def test_rewriting_preserves_normal_form(s):
    rng = random.Random(f"rewrite-{s.name}")
    for seed in range(300):
        f = random_formula(rng, s, "abc", rng.randint(0, 4))
        g = apply_axiom_once(f, seed, s, "abc")
        assert normal_form(g, s) == normal_form(f, s)


def test_every_axiom_kind_fires():
    rng = random.Random(0)
    seen = set()
    for _ in range(400):
        f = random_formula(rng, RATIONAL, "ab", 3)
        seen |= {name for _, name, _ in axiom_redexes(f, RATIONAL, "ab")}
    for name in ["diam-zero", "diam-join", "diam-join⁻¹", "join-commutative",
                 "join-associative", "join-unit-right", "scale-join", "scale-compose",
                 "scale-zero", "scale-diam"]:
        assert name in seen


def test_pairing_examples(a1):
    assert pairing(Weighting(BOOLEAN, {("a", "b"): True}), tr(a1, 4)["x"]) is True
    assert pairing(Weighting(NAT), Weighting(NAT, {(): 4})) == 0
    assert pairing(Weighting(RATIONAL, {("a",): F(1, 2)}),
                   Weighting(RATIONAL, {("a",): F(1, 2), ("b",): F(1, 2)})) == F(1, 4)


def test_distinguish_examples(a1):
    assert format_formula(distinguish(a1, "x", "y1", 3)) == "<b>end"
    assert distinguish(a1, "x", "x2", 6) is None
    assert distinguish(a1, "x", "x", 4) is None


def test_refute_examples():
    abc = ("a", "b", "c")
    assert refute(BOOLEAN, abc, parse_formula(BIFURCATION_L), parse_formula(BIFURCATION_R)) is None
    aut, x = refute(BOOLEAN, abc, parse_formula("<a>end"), parse_formula("<b>end"))
    assert aut.states == ("s0", "s1") and x == "s0"
    assert evaluate(aut, parse_formula("<a>end"), x) is True
    assert evaluate(aut, parse_formula("<b>end"), x) is False
    same = parse_formula("<c>end + end")
    assert refute(NAT, abc, same, same) is None


@pytest.mark.parametrize("s", ALL_SEMIRINGS, ids=lambda s: s.name)
def test_adequacy(s):
    rng = random.Random(f"adequacy-{s.name}")
    for aut in corpus(s, 30, seed=6):
        f = random_formula(rng, s, aut.alphabet, rng.randint(0, 5))
        nf = normal_form(f, s)
        t = tr(aut, depth(f) + 1)
        for x in aut.states:
            assert s.eq(evaluate(aut, f, x), pairing(nf, t[x]))


@pytest.mark.parametrize("s", ALL_SEMIRINGS, ids=lambda s: s.name)
def test_trace_equivalent_states_satisfy_same_formulas(s):
    rng = random.Random(f"invariance-{s.name}")
    for aut in corpus(s, 30, seed=7):
        f = random_formula(rng, s, aut.alphabet, rng.randint(0, 4))
        n = depth(f) + 1
        for x in aut.states:
            for y in aut.states:
                if equiv_bounded(aut, x, y, n):
                    assert s.eq(evaluate(aut, f, x), evaluate(aut, f, y))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 3))
def test_distinguish_contract(seed, m):
    aut = random_automaton(NAT, 4, "ab", "1/3", seed)
    for x in aut.states:
        for y in aut.states:
            f = distinguish(aut, x, y, m)
            if f is None:
                assert equiv_bounded(aut, x, y, m + 1)
            else:
                assert evaluate(aut, f, x) != evaluate(aut, f, y)
