from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from castelbound.bounds import cy4_ch3_bound, epsilon
from castelbound.constants import (brute_force_minimum, ceil_rat, cor_in_divisor_report,
                                   cor_in_divisor_threshold, cy4_empty, gv_degree_threshold,
                                   gv_degree_threshold_report, gv_vanish, gv_vanish_inequality,
                                   k_range, pt_dt_vanish, pt_vanish_inequality, solve_N0, solve_N1,
                                   solve_N_nl, solve_theorem_chain, verify_report)
from castelbound.errors import IncompleteMap
from castelbound.tiltwalls import Polarization


def _n0_oracle(n, horizon=3000):
    # least N with x^2/(2s) + s x/2 - eps(x,s) <= x^2/(2n) + n x/2 - eps(x,n) for all x >= N
    def ok(x):
        return all(Fraction(x * x, 2 * s) + Fraction(s * x, 2) - epsilon(x, s)
                   <= Fraction(x * x, 2 * n) + Fraction(n * x, 2) - epsilon(x, n)
                   for s in range(n + 1, 4 * n // 3 + 1))
    last_bad = max((x for x in range(1, horizon) if not ok(x)), default=0)
    return last_bad + 1


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_N0_matches_scan(n):
    assert solve_N0(n).value == _n0_oracle(n)


def test_N0_known_values():
    assert [solve_N0(n).value for n in range(1, 5)] == [1, 1, 9, 16]


def test_no_wall_subcase():
    # sqrt(2N) >= 4 + 1/2: 2*11 = 22 > 81/4 > 20
    assert solve_N1(2, 4, only="no-wall").value == 11
    assert solve_N1(2, 4).value == 11


def test_N1_for_n1_has_no_no_wall_terms():
    assert all(i.id != "no-wall" for i in solve_N1(1, 3).inequalities)


def test_N_nl_closed_form_for_n1():
    for l in range(1, 7):
        N1 = solve_N1(1, l).value
        rhs = 1 + Fraction(1, 2) + N1 * N1 / Fraction(2)
        assert solve_N_nl(1, l).value == max(N1, ceil_rat(rhs * rhs / 2))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_reports_minimal_by_scan(n):
    for l in range(1, 7):
        for report in (solve_N1(n, l), solve_N_nl(n, l)):
            assert verify_report(report)
            assert brute_force_minimum(report.conditions) == report.value


def test_dependency_order():
    for n in range(1, 5):
        for l in range(1, 7):
            assert solve_N0(n).value <= solve_N1(n, l).value <= solve_N_nl(n, l).value
        for m in (1, 2):
            chain = solve_theorem_chain(Polarization(n, 1, m))
            values = [chain[k].value for k in ("N2", "N3", "N4", "N_H")]
            assert values == sorted(values)
            assert all(verify_report(r) for r in chain.values())


def test_witness_is_binding():
    for report in (solve_N0(4), solve_N1(2, 4), solve_N_nl(3, 5)):
        w = report.minimality_witness
        assert w is not None and w.binding and w.minimum == report.value


def test_divisor_threshold_equal_degrees_is_ceil_term():
    for l in (1, 4):
        assert cor_in_divisor_threshold(3, 3, 2, l) == ceil_rat(Fraction(solve_N_nl(3, l).value, 2))


def test_divisor_threshold_known_value():
    assert cor_in_divisor_threshold(5, 6, 1, 6) == 2123346
    assert verify_report(cor_in_divisor_report(5, 6, 1, 6))


def test_divisor_threshold_monotone_in_nD():
    for m in (1, 2):
        for nt in range(1, 5):
            vals = [cor_in_divisor_threshold(nt, nd, m, 3) for nd in range(nt, nt + 4)]
            assert vals == sorted(vals)


def test_chain_constant_map_reduces_N2():
    # l = k * m^3 * n grows with k, so the top k of the range is binding
    pol = Polarization(2, 1, 1)
    chain = solve_theorem_chain(pol)
    assert chain["N2"].value == max(cor_in_divisor_threshold(2, 2, 1, 2 * k) for k in k_range(2))


def test_chain_rejects_incomplete_map():
    with pytest.raises(IncompleteMap):
        solve_theorem_chain(Polarization(3), {1: 3, 2: 3})


def test_k_range():
    assert list(k_range(3)) == [1, 2, 3, 4]
    assert list(k_range(3, 3)) == [3, 4]


@given(st.integers(min_value=1, max_value=50))
def test_gv_degree_threshold_substitutions(NH):
    assert gv_degree_threshold(5, 1, NH) == 5 * NH * NH + 5
    assert gv_degree_threshold(1, 1, NH) == NH * NH
    assert gv_degree_threshold(5, 1, NH + 1) > gv_degree_threshold(5, 1, NH)


def test_gv_degree_threshold_ceiled_flag():
    rep = gv_degree_threshold_report(3, 1, 1)
    assert rep["ceiled"] and rep["value"] == 2 and rep["exact"] == "3/2"


def test_pt_vanishing():
    NH = 7
    assert not pt_dt_vanish(-10**6, NH - 1, 5, 1, NH)
    d = NH
    s = -(Fraction(d * d, 10) + Fraction(d, 2)) - 1
    assert pt_dt_vanish(int(s // 1), d, 5, 1, NH)
    assert not pt_dt_vanish(0, 100, 5, 1, NH)


@settings(max_examples=50)
@given(st.integers(min_value=0, max_value=400))
def test_gv_vanish_monotone_in_g(g):
    d = 60
    NH = 3
    assert gv_degree_threshold(5, 1, NH) <= d
    if gv_vanish(g, d, 5, 1, NH):
        assert gv_vanish(g + 1, d, 5, 1, NH)


def test_gv_vanish_genus_zero_decided_exactly():
    # small n: 1 - eps > 0, so g = 0 never vanishes; this is per instance, not a blanket claim
    assert not gv_vanish(0, 40, 5, 1, 2)


def test_cy4_empty():
    NH = 4
    assert not cy4_empty(NH - 1, -10**9, 6, NH)
    assert cy4_empty(NH, -cy4_ch3_bound(NH, 6) - 1, 6, NH)


def test_inequality_strings():
    assert gv_vanish_inequality(5, 1) == "g > d^2/10 + d/2 + 1 - eps(d, 5)"
    assert pt_vanish_inequality(5, 1) == "s < -(d^2/10 + d/2 - eps(d, 5))"
    assert gv_vanish_inequality(2, 2) == "g > d^2/4 + 4*d + 1 - eps(2*d, 8)"
