from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterx.poly import Polynomial, parse_poly
from clusterx.semifield import (
    DivisionError,
    FactorBasis,
    RationalFunction,
    SemifieldError,
    Trivial,
    Tropical,
    Universal,
    rf_canonicalize,
    sf_oplus,
    value_from_json,
)

NV = 3

# ---------------------------------------------------------------- rational functions


def test_canonical_form_cancels_common_factor():
    x, y = parse_poly("x", ["x", "y"]), parse_poly("y", ["x", "y"])
    rf = rf_canonicalize(x * x - y * y, x + y)
    assert rf.num == x - y
    assert rf.den == Polynomial.one(2)


def test_zero_denominator_rejected():
    with pytest.raises(DivisionError):
        rf_canonicalize(Polynomial.one(1), Polynomial.zero(1))


def test_denominator_sign_normalized():
    x = Polynomial.var(1, 0)
    rf = rf_canonicalize(x, -(x + 1))
    assert rf.den.leading_coefficient() > 0
    assert rf == rf_canonicalize(-x, x + 1)


# ---------------------------------------------------------------- universal values

# a shared basis keeps values comparable across hypothesis examples
BASIS = FactorBasis(NV)
GENS = Universal.generators(BASIS)


def _build(ops):
    """Subtraction-free expression assembled from generators."""
    v = GENS[ops[0] % NV]
    for op, i in ops[1:]:
        g = GENS[i % NV]
        if op == 0:
            v = v * g
        elif op == 1:
            v = v / g
        else:
            v = v.oplus(g)
    return v


exprs = st.tuples(
    st.integers(0, NV - 1),
    *[st.tuples(st.integers(0, 2), st.integers(0, NV - 1))] * 3,
).map(lambda t: _build((t[0],) + t[1:]))

positive_points = st.tuples(*[st.fractions(min_value=Fraction(1, 10), max_value=10)] * NV)


@settings(max_examples=40, deadline=None)
@given(exprs, exprs, exprs)
def test_universal_semifield_axioms(a, b, c):
    assert a.oplus(b) == b.oplus(a)
    assert a.oplus(b).oplus(c) == a.oplus(b.oplus(c))
    assert a * (b.oplus(c)) == (a * b).oplus(a * c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * a.inverse() == Universal.one(BASIS)


@settings(max_examples=40, deadline=None)
@given(exprs, positive_points)
def test_subtraction_free_values_are_positive(a, pt):
    assert a.evaluate(list(pt)) > 0


@settings(max_examples=40, deadline=None)
@given(exprs, exprs, positive_points)
def test_universal_agrees_with_rational_functions(a, b, pt):
    pt = list(pt)
    assert (a.oplus(b)).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)
    assert (a / b).evaluate(pt) == a.evaluate(pt) / b.evaluate(pt)
    assert a.rational_function().evaluate(pt) == a.evaluate(pt)


def test_oplus_one_shortcut():
    x = GENS[0]
    assert x.oplus_one() == x.oplus(Universal.one(BASIS))


def test_json_roundtrip_universal():
    v = (GENS[0].oplus(GENS[1])) / GENS[2]
    assert value_from_json(v.to_json(), BASIS) == v


def test_universal_difference_of_equal_values_is_none():
    assert (GENS[0] - GENS[0]) is None


# ---------------------------------------------------------------- tropical and trivial

trop = st.lists(st.integers(-4, 4), min_size=2, max_size=2).map(Tropical)


@settings(max_examples=100, deadline=None)
@given(trop, trop, trop)
def test_tropical_axioms(a, b, c):
    assert a.oplus(b) == b.oplus(a)
    assert a * (b.oplus(c)) == (a * b).oplus(a * c)
    assert a * a.inverse() == Tropical.one(2)


def test_tropical_min():
    assert Tropical([1, -2]).oplus(Tropical([0, 3])) == Tropical([0, -2])


def test_trivial_semifield():
    t = Trivial()
    assert t * t == t and t.oplus(t) == t and t.inverse() == t


def test_mixed_semifields_rejected():
    with pytest.raises(SemifieldError):
        sf_oplus(Tropical([0, 1]), Trivial())
