from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heavytail.ratpoly import (BigRat, Poly, format_rational, parse_rational, poly_compose_affine,
                               poly_divide_exact, poly_eval, poly_shift)

rats = st.fractions(min_value=-50, max_value=50, max_denominator=12)
polys = st.lists(rats, max_size=8).map(Poly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())


def test_bigrat_is_fraction():
    assert BigRat(3, 6) == Fraction(1, 2)


def test_trimming_and_degree():
    p = Poly([1, 2, 0, 0])
    assert p.coeffs == (1, 2)
    assert p.degree == 1
    assert Poly().degree == -1
    assert Poly([0, 0]).is_zero()


def test_floats_rejected():
    with pytest.raises(TypeError):
        Poly([0.5])


def test_immutable():
    p = Poly([1])
    with pytest.raises(AttributeError):
        p.coeffs = (2,)


def test_from_roots_vanishes():
    p = Poly.from_roots([0, Fraction(1, 2), Fraction(-1, 2)])
    assert p == Poly([0, Fraction(-1, 4), 0, 1])
    for r in (0, Fraction(1, 2), Fraction(-1, 2)):
        assert p(r) == 0


def test_string_form():
    assert str(Poly([1, -2, 3])) == "1 - 2*s + 3*s^2"


@given(polys, polys)
def test_add_mul_commute(a, b):
    assert a + b == b + a
    assert a * b == b * a


@given(polys, polys, polys)
@settings(max_examples=50)
def test_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(polys, polys, rats)
def test_product_rule_and_eval(a, b, x):
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()
    assert (a * b)(x) == a(x) * b(x)


@given(polys, rats)
def test_shift_round_trip(p, c):
    assert poly_shift(poly_shift(p, c), -c) == p


@given(polys, rats, rats)
def test_shift_matches_evaluation(p, c, x):
    assert poly_shift(p, c)(x) == p(x + c)


@given(polys, rats, rats, rats)
def test_compose_affine(p, a, b, x):
    assert poly_compose_affine(p, a, b)(x) == p(a + b * x)


@given(polys)
def test_reflect_involution(p):
    assert p.reflect().reflect() == p


@given(polys, nonzero_polys)
def test_division_reconstructs(p, d):
    quo, rem = poly_divide_exact(p, d)
    assert quo * d + rem == p
    assert rem.degree < d.degree


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        poly_divide_exact(Poly([1]), Poly())


def test_exact_division_has_zero_remainder():
    d = Poly([1, 1])
    quo, rem = divmod(Poly([3, 1, 4]) * d, d)
    assert rem.is_zero() and quo == Poly([3, 1, 4])


@given(rats)
def test_format_parse_round_trip(x):
    text = format_rational(x)
    assert "." not in text and "e" not in text
    assert parse_rational(text) == x


def test_format_integer():
    assert format_rational(Fraction(-96)) == "-96/1"


def test_parity_checks():
    assert Poly([1, 0, 2]).odd_part_zero()
    assert not Poly([1, 1]).odd_part_zero()
    assert Poly([0, 3]).even_part_zero()


def test_horner_matches_naive():
    p = Poly([Fraction(1, 3), -2, 5, Fraction(7, 11)])
    x = Fraction(-3, 7)
    assert poly_eval(p, x) == sum(c * x ** i for i, c in enumerate(p.coeffs))
