from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_hyers import PrimeContext
from padic_hyers.equations import PolynomialFunction
from padic_hyers.parser import PolynomialSyntaxError, parse_polynomial, render_polynomial

Q2 = PrimeContext(2)


@pytest.mark.parametrize("text, coeffs", [
    ("x^3 + x^4", {3: 1, 4: 1}),
    ("3/4*x^2 - x", {2: Fraction(3, 4), 1: -1}),
    ("x^3 + 2*x^3", {3: 3}),
    ("  -x^2+x^3 ", {2: -1, 3: 1}),
    ("5", {0: 5}),
    ("x^3 + 5", {0: 5, 3: 1}),
    ("x - x", {}),
    ("+ 7/3 * x ^ 10", {10: Fraction(7, 3)}),
])
def test_parse(text, coeffs):
    assert parse_polynomial(text, Q2).coeffs == {d: Fraction(c) for d, c in coeffs.items()}


@pytest.mark.parametrize("text, offset", [
    ("x^", 2),
    ("3x", 1),
    ("x + + x", 4),
    ("x^3 $", 4),
    ("", 0),
    ("1/0*x", 2),
    ("x^-2", 2),
])
def test_syntax_errors(text, offset):
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial(text, Q2)
    assert info.value.offset == offset


def test_offset_counts_bytes():
    with pytest.raises(PolynomialSyntaxError) as info:
        parse_polynomial("x + é", Q2)
    assert info.value.offset == 4


def test_render():
    assert render_polynomial(parse_polynomial("x^4 + x^3", Q2)) == "x^3 + x^4"
    assert render_polynomial(parse_polynomial("3/4*x^2 - x", Q2)) == "-x + 3/4*x^2"
    assert render_polynomial(PolynomialFunction({}, Q2)) == "0"


coeffs = st.dictionaries(st.integers(0, 9),
                         st.fractions(min_value=-50, max_value=50, max_denominator=30),
                         max_size=6)


@given(coeffs)
def test_round_trip(c):
    f = PolynomialFunction(c, Q2)
    text = render_polynomial(f)
    g = parse_polynomial(text, Q2)
    assert g == f
    assert render_polynomial(g) == text
