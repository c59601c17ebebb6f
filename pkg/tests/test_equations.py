import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from padic_hyers import PrimeContext
from padic_hyers.equations import (
    EquationFamily,
    PolynomialFunction,
    cubic_defect,
    evaluate,
    is_exact_solution,
    jun_kim_defect,
    park_bae_defect,
    quartic_defect,
)
from padic_hyers.padic_core import ContextMismatchError

Q2 = PrimeContext(2)
X, Y, K = sympy.symbols("x y k")
GRID = [Fraction(v) for v in (-2, -1, 0, 1, 2)]
GRID25 = list(itertools.product(GRID, GRID))


def poly(coeffs, ctx=Q2):
    return PolynomialFunction(coeffs, ctx)


def sym_of(coeffs):
    return lambda t: sum(sympy.Rational(c.numerator, c.denominator) * t**m
                         for m, c in ((m, Fraction(c)) for m, c in coeffs.items()))


def sym_cubic(coeffs, k):
    f = sym_of(coeffs)
    return sympy.expand(f(k * X + Y) + f(k * X - Y) - k * (f(X + Y) + f(X - Y))
                        - 2 * (k**3 - k) * f(X))


def sym_quartic(coeffs, k):
    f = sym_of(coeffs)
    return sympy.expand(f(k * X + Y) + f(k * X - Y) - k**2 * (f(X + Y) + f(X - Y))
                        - 2 * k**2 * (k**2 - 1) * f(X) + 2 * (k**2 - 1) * f(Y))


def as_fraction(expr):
    r = sympy.Rational(expr)
    return Fraction(int(r.p), int(r.q))


def test_zero_coefficients_dropped():
    assert poly({3: 1, 4: 0}).coeffs == {3: Fraction(1)}


def test_evaluate_examples():
    assert evaluate(poly({3: 1}), 2) == 8
    assert evaluate(poly({3: 1, 4: 1}), 2) == 24
    assert evaluate(poly({2: Fraction(3, 4)}), 2) == 3
    assert evaluate(poly({}), 5) == 0


def test_evaluate_context_mismatch():
    with pytest.raises(ContextMismatchError):
        evaluate(poly({1: 1}), PrimeContext(3)(1))


def test_symbolic_closed_forms():
    # the oracle itself: known expansions for k = 2
    assert sym_cubic({2: 1}, 2) == sympy.expand(-8 * X**2 - 2 * Y**2)
    assert sym_cubic({4: 1}, K) == sympy.expand(
        2 * (K**4 - K**3) * X**4 + 12 * (K**2 - K) * X**2 * Y**2 + 2 * (1 - K) * Y**4)
    assert sym_cubic({3: 1}, K) == 0
    assert sym_quartic({4: 1}, K) == 0


@pytest.mark.parametrize("coeffs, k, x, y, expected", [
    ({2: 1}, 2, 1, 1, -10),
    ({4: 1}, 2, 1, 1, 38),
    ({3: Fraction(-3, 7)}, 4, 5, -2, 0),
])
def test_cubic_defect_examples(coeffs, k, x, y, expected):
    assert cubic_defect(poly(coeffs), x, y, k) == expected
    assert as_fraction(sym_cubic(coeffs, k).subs({X: x, Y: y})) == expected


@pytest.mark.parametrize("coeffs, k, x, y, expected", [
    ({2: 1}, 2, 1, 0, -24),
    ({5: 1}, 2, 1, 1, 98),
    ({4: 7}, 3, 2, -1, 0),
])
def test_quartic_defect_examples(coeffs, k, x, y, expected):
    assert quartic_defect(poly(coeffs), x, y, k) == expected
    assert as_fraction(sym_quartic(coeffs, k).subs({X: x, Y: y})) == expected


def test_jun_kim_examples():
    assert jun_kim_defect(poly({3: 1}), 1, 1) == 0
    assert jun_kim_defect(poly({2: 1}), 1, 1) == -10
    # 625 + 81 - 2*81 - 2*1 - 12*16
    assert jun_kim_defect(poly({4: 1}), 2, 1) == 350
    assert cubic_defect(poly({4: 1}), 2, 1, 2) == 350
    assert as_fraction(sym_cubic({4: 1}, 2).subs({X: 2, Y: 1})) == 350


def test_park_bae_examples():
    assert park_bae_defect(poly({4: 1}), 1, 1) == 0
    assert park_bae_defect(poly({2: 1}), 0, 1) == -24
    # 3^5 + (-1)^5 - 4*(2^5 + 0) - 24 + 6; odd f, so not the swapped quartic value 98
    assert park_bae_defect(poly({5: 1}), 1, 1) == 96
    assert quartic_defect(poly({5: 1}), 1, 1, 2) == 98


coeff_maps = st.dictionaries(
    st.integers(0, 6),
    st.fractions(min_value=-9, max_value=9, max_denominator=9),
    max_size=4)
small = st.fractions(min_value=-20, max_value=20, max_denominator=8)


@settings(max_examples=60, deadline=None)
@given(coeff_maps, small, small, st.integers(1, 6))
def test_cubic_defect_matches_symbolic_oracle(coeffs, x, y, k):
    assert cubic_defect(poly(coeffs), x, y, k) == as_fraction(
        sym_cubic(coeffs, k).subs({X: x, Y: y}))


@settings(max_examples=60, deadline=None)
@given(coeff_maps, small, small, st.integers(1, 6))
def test_quartic_defect_matches_symbolic_oracle(coeffs, x, y, k):
    assert quartic_defect(poly(coeffs), x, y, k) == as_fraction(
        sym_quartic(coeffs, k).subs({X: x, Y: y}))


@pytest.mark.parametrize("a", [1, -1, Fraction(3, 7), Fraction(-3, 7)])
@pytest.mark.parametrize("k", range(1, 6))
def test_exact_solutions_are_killed(a, k):
    cubic = poly({3: a})
    quartic = poly({4: a})
    for x, y in GRID25:
        assert cubic_defect(cubic, x, y, k) == 0
        assert quartic_defect(quartic, x, y, k) == 0


@given(coeff_maps, small, small)
def test_specialisations(coeffs, x, y):
    f = poly(coeffs)
    assert jun_kim_defect(f, x, y) == cubic_defect(f, x, y, 2)
    # the x/y swap only lines up for even f
    even = poly({m: c for m, c in coeffs.items() if m % 2 == 0})
    assert park_bae_defect(even, x, y) == quartic_defect(even, y, x, 2)


@given(coeff_maps, small, st.integers(1, 6))
def test_y_zero_identities(coeffs, x, k):
    f = poly(coeffs)
    assert cubic_defect(f, x, 0, k) == 2 * (f(k * Q2(x)) - k**3 * f(x))
    g = poly({m: c for m, c in coeffs.items() if m != 0})
    assert quartic_defect(g, x, 0, k) == 2 * (g(k * Q2(x)) - k**4 * g(x))


@given(coeff_maps, small, small)
def test_k_one_degenerates(coeffs, x, y):
    f = poly(coeffs)
    assert cubic_defect(f, x, y, 1) == 0
    assert quartic_defect(f, x, y, 1) == 0


@given(coeff_maps, coeff_maps, small, small, st.integers(1, 5))
def test_defect_is_linear(c1, c2, x, y, k):
    f, g = poly(c1), poly(c2)
    assert cubic_defect(f + g, x, y, k) == cubic_defect(f, x, y, k) + cubic_defect(g, x, y, k)
    assert quartic_defect(f + g, x, y, k) == (quartic_defect(f, x, y, k)
                                              + quartic_defect(g, x, y, k))


def test_is_exact_solution():
    assert is_exact_solution(poly({3: 1}), EquationFamily("cubic", 3), GRID25)
    assert not is_exact_solution(poly({3: 1, 4: 1}), EquationFamily("cubic", 2), [(1, 1)])
    assert is_exact_solution(poly({2: 5, 7: 1}), EquationFamily("cubic", 1), GRID25)
    with pytest.raises(ValueError):
        is_exact_solution(poly({3: 1}), EquationFamily("cubic", 2), [])


def test_equation_family_validation():
    assert EquationFamily("cubic", 2).degree == 3
    assert EquationFamily("quartic", 2).degree == 4
    with pytest.raises(ValueError):
        EquationFamily("quintic", 2)
    with pytest.raises(ValueError):
        EquationFamily("cubic", 0)
