from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from castelbound.bounds import (EpsilonTable, asymptotic_main_bound, bmt_bound,
                                castelnuovo_conjecture_bound, cy4_ch3_bound, epsilon, epsilon_max,
                                optimal_bound, planar_bound, surface_bound)
from castelbound.errors import MissingTable
from castelbound.numerics import Surd
from castelbound.targets import load_target
from castelbound.tiltwalls import TiltPoint, bmt_q, ideal_class_p3

degrees = st.integers(min_value=1, max_value=500)
ns = st.integers(min_value=1, max_value=40)


def test_quintic_epsilon_values():
    assert epsilon(1, 5) == Fraction(8, 5)
    assert epsilon(2, 5) == Fraction(12, 5)
    assert epsilon(5, 5) == 0


@given(degrees, ns)
def test_epsilon_symmetric_periodic_and_banded(d, n):
    e = epsilon(d, n)
    assert e == epsilon(d + n, n)
    assert e == epsilon(n - d % n, n) or d % n == 0
    assert 0 <= e <= epsilon_max(n)


def test_planar_bound():
    assert [planar_bound(d) for d in range(1, 7)] == [0, 0, 1, 3, 6, 10]


def test_surface_bound_quadric():
    # curves on a quadric surface: g <= d^2/4 - d + 1 - eps(d, 2)
    assert surface_bound(4, 2) == 1
    assert surface_bound(5, 2) == Fraction(25, 4) - 5 + 1 - Fraction(1, 4)


def _bmt_threshold(d, b0):
    q0 = bmt_q(ideal_class_p3(d, 0), TiltPoint.on_boundary(b0))
    q1 = bmt_q(ideal_class_p3(d, 1), TiltPoint.on_boundary(b0))
    return -q0 / (q1 - q0)


@pytest.mark.parametrize("b0", [Fraction(-1), Fraction(-3, 2), Fraction(-2), Fraction(-3)])
def test_bmt_bound_is_boundary_threshold(b0):
    for d in range(1, 31):
        assert _bmt_threshold(d, b0) == bmt_bound(d, b0)


def test_bmt_bound_irrational_point():
    value = bmt_bound(2, -Surd.sqrt(2))
    assert isinstance(value, Surd)


def test_asymptotic_bound_leading_term():
    d = 10**7
    for n, m, s in ((5, 1, 1), (8, 1, 1), (2, 2, 1)):
        ratio = asymptotic_main_bound(d, n, m, s) / (d * d)
        assert abs(ratio - Fraction(1, 2 * s * n)) < Fraction(1, 1000)


def test_castelnuovo_and_cy4():
    assert castelnuovo_conjecture_bound(10, 5) == 10 + 5 + 1
    assert cy4_ch3_bound(5, 5) == Fraction(5, 2)


def test_optimal_bound_uses_target_table():
    x5 = load_target("x5")
    assert optimal_bound(x5, 9) == Fraction(81, 10) + Fraction(9, 2) + 1 - x5.epsilon_table(9)


def test_optimal_bound_requires_table():
    with pytest.raises(MissingTable):
        optimal_bound(load_target("pfaff-gr27-x"), 3)


def test_epsilon_table_validation():
    EpsilonTable(2, {1: Fraction(1, 4), 2: 0})
    with pytest.raises(ValueError):
        EpsilonTable(3, {1: 1, 2: 0, 3: 0})
    with pytest.raises(ValueError):
        EpsilonTable(2, {1: 0, 2: 1})
