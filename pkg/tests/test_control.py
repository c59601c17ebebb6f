from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_hyers import PrimeContext
from padic_hyers.control import (
    ControlFunction,
    HypothesisReport,
    corollary_conditions,
    evaluate_control,
    phi_tilde,
    phi_tilde_condition,
    uniqueness_tail_condition,
    vanishing_condition,
    window_max,
)

Q2, Q3 = PrimeContext(2), PrimeContext(3)
PAIRS = [(Fraction(a), Fraction(b)) for a in (0, 1, 2, Fraction(1, 2), 3) for b in (0, 1, 6)]


def test_evaluate_power_control():
    assert evaluate_control(ControlFunction.power(1, 4, Q2), 1, 0) == 1
    assert evaluate_control(ControlFunction.power(1, 4, Q2), 2, 2) == Fraction(1, 8)
    assert evaluate_control(ControlFunction.power(3, 5, Q3), Fraction(1, 3), 0) == 729


def test_constant_and_table_controls():
    assert evaluate_control(ControlFunction.constant(Fraction(1, 2), Q2), 17, 5) == Fraction(1, 2)
    table = ControlFunction.from_table({(1, 0): Fraction(1, 3)}, Q2)
    assert table(1, 0) == Fraction(1, 3)
    with pytest.raises(KeyError):
        table(2, 0)


def test_control_validation():
    with pytest.raises(ValueError):
        ControlFunction.power(1, 0, Q2)
    with pytest.raises(ValueError):
        ControlFunction.power(-1, 4, Q2)
    with pytest.raises(ValueError):
        ControlFunction("weird", Q2)


def test_vanishing_power_examples():
    assert vanishing_condition(ControlFunction.power(1, 4, Q2), 2, 3, PAIRS).holds
    fails = vanishing_condition(ControlFunction.power(1, 4, Q2), 3, 3, PAIRS)
    assert not fails.holds and fails.analytic and fails.witness is None
    assert vanishing_condition(ControlFunction.power(0, 4, Q2), 3, 3, PAIRS).holds
    assert not vanishing_condition(ControlFunction.power(1, 3, Q2), 2, 3, PAIRS).holds
    assert vanishing_condition(ControlFunction.power(1, 5, Q2), 2, 4, PAIRS).holds


def test_vanishing_descending():
    assert vanishing_condition(ControlFunction.power(1, 2, Q2), 2, 3,
                               direction="descending").holds
    assert not vanishing_condition(ControlFunction.power(1, 4, Q2), 2, 3,
                                   direction="descending").holds
    assert vanishing_condition(ControlFunction.constant(1, Q2), 2, 3,
                               direction="descending").holds
    assert not vanishing_condition(ControlFunction.constant(1, Q2), 2, 3).holds


def _power_table(r, k, points, depth, ctx):
    # a table mirroring delta * (|x|^r + |y|^r) on the dilated points
    phi = ControlFunction.power(1, r, ctx)
    table = {}
    for x, y in points:
        for n in range(depth + 1):
            kx, ky = Fraction(k) ** n * x, Fraction(k) ** n * y
            table[(kx, ky)] = phi(kx, ky).value
    return ControlFunction.from_table(table, ctx)


def test_table_vanishing_agrees_with_analytic():
    pts = [(Fraction(1), Fraction(0)), (Fraction(3), Fraction(1, 2))]
    good = _power_table(4, 2, pts, 6, Q2)
    assert vanishing_condition(good, 2, 3, pts, n_max=6).holds
    bad = _power_table(2, 2, pts, 6, Q2)
    report = vanishing_condition(bad, 2, 3, pts, n_max=6)
    assert not report.holds and not report.analytic
    assert report.witness == {"x": 1, "y": 0, "n": 1}


def test_table_vanishing_stuck_sequence():
    pts = [(Fraction(1), Fraction(0))]
    flat = _power_table(4, 3, pts, 5, Q2)  # |3|_2 = 1: constant ratio
    report = vanishing_condition(flat, 3, 3, pts, n_max=5)
    assert not report.holds
    assert report.witness["n"] == 5


def test_phi_tilde_examples():
    phi = ControlFunction.power(1, 4, Q2)
    assert phi_tilde(phi, 1, 2, 3, 10) == 1
    assert phi_tilde(phi, 0, 2, 3, 10) == 0
    assert phi_tilde(phi, 2, 2, 3, 10) == Fraction(1, 16)


@given(st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 1000),
       st.integers(1, 12), st.sampled_from([(4, 3), (5, 3), (5, 4), (7, 4)]))
def test_phi_tilde_equals_phi_at_zero(x, n, rd):
    r, d = rd
    phi = ControlFunction.power(Fraction(2, 3), r, Q2)
    assert phi_tilde(phi, x, 2, d, n) == phi(x, 0)


@given(st.integers(1, 300), st.integers(1, 15))
def test_phi_tilde_monotone_in_n(x, n):
    phi = ControlFunction.power(1, 2, Q2)  # r < d: the running max keeps growing
    assert phi_tilde(phi, x, 2, 3, n) <= phi_tilde(phi, x, 2, 3, n + 1)


def test_phi_tilde_condition():
    assert phi_tilde_condition(ControlFunction.power(1, 4, Q2), 2, 3).holds
    assert not phi_tilde_condition(ControlFunction.power(1, 2, Q2), 2, 3).holds
    assert phi_tilde_condition(ControlFunction.power(1, 2, Q2), 3, 3).holds
    assert phi_tilde_condition(ControlFunction.constant(1, Q2), 2, 3, direction="descending").holds
    pts = [(Fraction(1), Fraction(0))]
    table = _power_table(4, 2, pts, 20, Q2)
    assert phi_tilde_condition(table, 2, 3, [1], n_max=20).holds
    grow = _power_table(2, 2, pts, 20, Q2)
    report = phi_tilde_condition(grow, 2, 3, [1], n_max=20)
    assert not report.holds and report.witness == {"x": 1, "n": 20}


def test_uniqueness_tail_examples():
    phi = ControlFunction.power(1, 4, Q2)
    assert uniqueness_tail_condition(phi, 1, 2, 3).holds
    for i in range(8):
        assert window_max(phi, 1, 2, 3, i, i + 10) == Fraction(1, 2**i)
    assert uniqueness_tail_condition(ControlFunction.power(0, 4, Q2), 1, 3, 3).holds
    assert not uniqueness_tail_condition(phi, 1, 3, 3).holds


def test_uniqueness_tail_table():
    pts = [(Fraction(1), Fraction(0))]
    table = _power_table(4, 2, pts, 30, Q2)
    assert uniqueness_tail_condition(table, 1, 2, 3, i_max=8, n_max=8).holds
    flat = _power_table(4, 3, pts, 30, Q2)
    report = uniqueness_tail_condition(flat, 1, 3, 3, i_max=8, n_max=8)
    assert not report.holds and report.witness == {"x": 1, "i": 8}


@pytest.mark.parametrize("r, d, k", [(4, 3, 2), (5, 3, 4), (2, 3, 3), (5, 4, 2), (3, 3, 3)])
def test_vanishing_and_tail_agree_for_power_family(r, d, k):
    phi = ControlFunction.power(1, r, Q2)
    assert vanishing_condition(phi, k, d).holds == uniqueness_tail_condition(phi, 1, k, d).holds


def test_corollary_examples():
    i, ii = corollary_conditions(4, 2, 3, Q2)
    assert i.holds and ii.holds
    assert "1/16 < |k|^3=1/8" in ii.detail
    _, ii = corollary_conditions(4, 3, 3, Q2)
    assert not ii.holds
    _, ii = corollary_conditions(5, 2, 4, Q2)
    assert ii.holds
    _, ii = corollary_conditions(3, 2, 3, Q2)
    assert not ii.holds


def test_corollary_callable_alpha():
    i, ii = corollary_conditions(lambda t: t**4 + 1, 2, 3, Q2)
    # (i): t^4/16 + 1 <= (17/16)(t^4 + 1) everywhere; (ii): 17/16 < 1/8 is false
    assert i.holds
    assert not ii.holds
    bad, _ = corollary_conditions(lambda t: Fraction(1) if t < 1 else Fraction(0), 2, 3, Q2)
    assert not bad.holds and bad.witness is not None


def test_corollary_descending():
    i, ii = corollary_conditions(2, 2, 3, Q2, direction="descending")
    assert i.holds and ii.holds
    _, ii = corollary_conditions(4, 2, 3, Q2, direction="descending")
    assert not ii.holds


def test_report_witness_invariant():
    with pytest.raises(ValueError):
        HypothesisReport("vanishing", True, False, witness={"n": 1})
    with pytest.raises(ValueError):
        HypothesisReport("vanishing", False, True, witness={"n": 1})
