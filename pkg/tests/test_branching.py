from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tracelogic.branching import (
    ProbabilityMode,
    Weighting,
    check_monad_and_strength_laws,
    double_strength,
    empty,
    flatten,
    fmap,
    kleisli_compose,
    strength,
    unit,
    validate_probability,
)
from tracelogic.semiring import BOOLEAN, MINPLUS, NAT, RATIONAL, SEMIRINGS

F = Fraction


def W(s, **kw):
    return Weighting(s, kw)


def test_unit_examples():
    assert unit(BOOLEAN, "q") == W(BOOLEAN, q=True)
    assert unit(RATIONAL, "q") == W(RATIONAL, q=F(1))
    assert unit(MINPLUS, "q") == W(MINPLUS, q=0)


def test_zero_weights_are_dropped():
    w = Weighting(RATIONAL, {"x": F(0), "y": F(1, 2)})
    assert w.support() == ["y"]
    assert Weighting(MINPLUS, {"x": float("inf")}) == empty(MINPLUS)


def test_flatten_examples():
    ab, bc = W(BOOLEAN, a=True, b=True), W(BOOLEAN, b=True, c=True)
    assert flatten(Weighting(BOOLEAN, {ab: True, bc: True})) == W(BOOLEAN, a=True, b=True, c=True)
    d1, d2 = W(RATIONAL, x=F(1)), W(RATIONAL, y=F(1))
    # 1/2·1 at x and 1/2·1 at y
    assert flatten(Weighting(RATIONAL, {d1: F(1, 2), d2: F(1, 2)})) == W(RATIONAL, x=F(1, 2), y=F(1, 2))
    w = W(NAT, x=2, y=3)
    assert flatten(unit(NAT, w)) == w


def test_map_examples():
    assert fmap(lambda _: "*", W(NAT, x=2, y=3)) == W(NAT, **{"*": 5})
    assert fmap(str.upper, W(BOOLEAN, x=True, y=True)) == W(BOOLEAN, X=True, Y=True)
    w = W(RATIONAL, x=F(1, 3))
    assert fmap(lambda v: v, w) == w


def test_map_collision_can_cancel():
    w = W(RATIONAL, x=F(1, 2), y=F(-1, 2))
    assert fmap(lambda _: "z", w) == empty(RATIONAL)


def test_kleisli_examples():
    g = {"y": W(RATIONAL, z=F(1, 3))}.__getitem__
    assert kleisli_compose(lambda x: unit(RATIONAL, x), g)("y") == g("y")
    f = {"x": W(BOOLEAN, y1=True, y2=True)}.__getitem__
    g = {"y1": W(BOOLEAN, z=True), "y2": empty(BOOLEAN)}.__getitem__
    assert kleisli_compose(f, g)("x") == W(BOOLEAN, z=True)
    f = {"x": W(RATIONAL, y=F(1, 2))}.__getitem__
    g = {"y": W(RATIONAL, z=F(1, 3))}.__getitem__
    assert kleisli_compose(f, g)("x") == W(RATIONAL, z=F(1, 6))


def test_strength_examples():
    assert strength(unit(NAT, "x"), "y") == unit(NAT, ("x", "y"))
    assert strength(W(BOOLEAN, a=True, b=True), "y") == Weighting(
        BOOLEAN, {("a", "y"): True, ("b", "y"): True})
    assert strength(empty(RATIONAL), "y") == empty(RATIONAL)


def test_double_strength_examples():
    assert double_strength(W(RATIONAL, x=F(1, 2)), W(RATIONAL, y=F(1, 3))) == Weighting(
        RATIONAL, {("x", "y"): F(1, 6)})
    assert double_strength(W(BOOLEAN, a=True, b=True), W(BOOLEAN, c=True)) == Weighting(
        BOOLEAN, {("a", "c"): True, ("b", "c"): True})
    assert double_strength(W(NAT, x=4), empty(NAT)) == empty(NAT)


def test_validate_probability():
    half_half = W(RATIONAL, x=F(1, 2), y=F(1, 2))
    assert validate_probability(half_half, ProbabilityMode.DISTRIBUTION) is None
    v = validate_probability(W(RATIONAL, x=F(1, 2)), ProbabilityMode.DISTRIBUTION)
    assert v is not None and v.mass == F(1, 2)
    assert validate_probability(W(RATIONAL, x=F(1, 2)), ProbabilityMode.SUBDISTRIBUTION) is None
    over = validate_probability(W(RATIONAL, x=F(3, 2)), ProbabilityMode.SUBDISTRIBUTION)
    assert over.mass == F(3, 2)
    with pytest.raises(ValueError):
        validate_probability(W(NAT, x=1), ProbabilityMode.DISTRIBUTION)


def test_printing():
    assert str(W(RATIONAL, y=F(1, 2), x=F(1, 2))) == "{x:1/2, y:1/2}"
    assert str(W(BOOLEAN, y=True, x=True)) == "{x, y}"
    assert str(empty(NAT)) == "{}"


@pytest.mark.parametrize("s", list(SEMIRINGS.values()), ids=list(SEMIRINGS))
def test_monad_and_strength_laws(s):
    report = check_monad_and_strength_laws(s, 500, seed=11)
    assert all(r.passed for r in report), [str(r) for r in report if not r.passed]


def test_law_report_is_deterministic():
    a = check_monad_and_strength_laws(RATIONAL, 30, seed=5)
    b = check_monad_and_strength_laws(RATIONAL, 30, seed=5)
    assert a == b


def weightings(s, values):
    keys = st.sampled_from(["a", "b", "c", "d"])
    return st.dictionaries(keys, values, max_size=4).map(lambda d: Weighting(s, d))


rationals = st.fractions(max_denominator=12).filter(lambda f: abs(f) < 10)


@given(weightings(RATIONAL, rationals))
def test_canonical_form_has_no_zeros(w):
    assert all(v != 0 for v in w.weights())
    assert Weighting(RATIONAL, w.items()) == w


@given(weightings(RATIONAL, rationals), weightings(RATIONAL, rationals))
def test_double_strength_both_routes(u, v):
    left = flatten(fmap(lambda p: fmap(lambda y: (p[0], y), p[1]), strength(u, v)))
    right = flatten(fmap(lambda p: fmap(lambda x: (x, p[0]), p[1]), strength(v, u)))
    assert left == right == double_strength(u, v)


@given(weightings(NAT, st.integers(0, 9)))
def test_unit_laws_nat(w):
    assert flatten(unit(NAT, w)) == w
    assert flatten(fmap(lambda x: unit(NAT, x), w)) == w
