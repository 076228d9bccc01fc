import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaclcd import asymptotics as A
from qaclcd.gf import FieldError
from qaclcd.group_algebra import GroupSpec
from qaclcd.idempotents import build_idempotents


def h_float(q, d):
    """Plain-float entropy as an independent reference."""
    if d == 0:
        return 0.0
    out = d * math.log(q - 1, q) - d * math.log(d, q)
    if d < 1:
        out -= (1 - d) * math.log(1 - d, q)
    return out


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_entropy_endpoints(q):
    assert A.entropy_hq(q, 0) == 0
    assert abs(A.entropy_hq(q, 1 - Fraction(1, q)) - 1) < 1e-12


def test_entropy_range():
    with pytest.raises(ValueError):
        A.entropy_hq(3, Fraction(7, 10))
    with pytest.raises(ValueError):
        A.entropy_hq(3, -0.1)


def test_entropy_monotone_instance():
    assert A.entropy_hq(3, Fraction(3, 10)) < A.entropy_hq(3, Fraction(1, 2))


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 7), st.fractions(min_value=0, max_value=1))
def test_entropy_matches_float_and_interval(q, t):
    d = t * (1 - Fraction(1, q))
    v = A.entropy_hq(q, d)
    assert abs(v - h_float(q, float(d))) < 1e-9
    enc = A.entropy_iv(q, d)
    assert float(enc.a) <= v + 1e-15 and v - 1e-15 <= float(enc.b)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_entropy_increasing_concave(q):
    top = 1 - Fraction(1, q)
    h = [A.entropy_hq(q, top * Fraction(k, 1000)) for k in range(1001)]
    d1 = [b - a for a, b in zip(h, h[1:])]
    assert all(x > 0 for x in d1)
    assert all(b - a < 1e-12 for a, b in zip(d1, d1[1:]))


@pytest.mark.parametrize("n,bound,count", [(5, 27, 320), (7, 243, 3136), (11, 19683, 236192)])
def test_cor41(n, bound, count):
    S = build_idempotents(GroupSpec((n,)), 3)
    rep = A.cor41_check(S, 2)
    assert rep.lower_bound == bound and rep.exact_count == count
    assert rep.cor41_hypothesis and rep.cor41_holds


def test_thm311_status(sys35, sys37):
    for S in (sys35, sys37):
        for d in (0, Fraction(1, 10), Fraction(1, 2)):
            assert A.thm311_bound(S, d).status == "not-applicable"
    S11 = build_idempotents(GroupSpec((11,)), 3)
    rep = A.thm311_bound(S11, Fraction(1, 1000))
    assert rep.status == "ok" and rep.hypothesis_ok
    assert rep.upper_bound_le_delta > 0 and rep.ratio_bound > 0


def test_thm311_monotone():
    S11 = build_idempotents(GroupSpec((11,)), 3)
    vals = [A.thm311_bound(S11, Fraction(k, 10000)).upper_bound_le_delta for k in range(0, 100, 10)]
    assert vals == sorted(vals)


def test_max_good_delta():
    assert A.max_good_delta(3, 7, 3) is None
    d = A.max_good_delta(3, 11, 5)
    assert d.denominator <= 2**20
    target = 0.5 - math.log(11, 3) / 5
    assert abs(A.entropy_hq(3, d) - target) < 1e-4
    assert float(A.margin_iv(3, 11, 5, d).a) > 0
    assert not float(A.margin_iv(3, 11, 5, d + Fraction(1, 2**20)).a) > 0


def test_mu_cyclic_matches_idempotents():
    checked = 0
    for q in (2, 3, 4, 5):
        for n in range(3, 40, 2):
            if math.gcd(n, q) != 1:
                continue
            try:
                S = build_idempotents(GroupSpec((n,)), q)
            except FieldError:  # splitting field beyond the table cap
                continue
            assert A.mu_cyclic(q, n) == S.mu
            checked += 1
    assert checked > 20


def test_scan_lengths():
    rows = A.scan_lengths(3, 60)
    assert any(r.n == 11 and r.mu == 5 for r in rows)
    assert all(r.n % 2 and math.gcd(r.n, 3) == 1 and r.ratio > 0 for r in rows)
    assert [r.ratio for r in rows] == sorted(r.ratio for r in rows)


def test_product_inequalities():
    r = A.product_ineq_report(2, (2, 2))
    assert (r.a_lhs, r.a_rhs, r.a_holds) == (9, 14, False)
    r = A.product_ineq_report(3, (3, 3))
    assert (r.a_lhs, r.a_rhs, r.a_holds) == (676, 727, False)
    assert (r.b_lhs, r.b_rhs, r.b_holds) == (784, 731, False)
    assert r.hypothesis_ok


@pytest.mark.parametrize("n", [5, 7, 11])
def test_omega(n):
    S = build_idempotents(GroupSpec((n,)), 3)
    assert all(ok for _, _, ok in A.omega_check(S))


def test_omega_sizes(sys37):
    assert A.omega_sizes(sys37) == {3: 2, 6: 1}


@pytest.mark.parametrize("n", [5, 7])
def test_ball_bound(n):
    S = build_idempotents(GroupSpec((n,)), 3)
    rows = A.ball_bound_check(S)
    assert rows and all(r["holds"] for r in rows)


def test_bound_vs_census_is_vacuous_at_desk_scale(sys35):
    # applicable and censusable never coincide yet; if one appears the bound must hold
    from qaclcd.lcd_field import census_le_delta, census_rows

    rows = census_rows(sys35, 2)
    applicable = 0
    for k in range(1, 7):
        d = Fraction(k, 10)
        rep = A.thm311_bound(sys35, d, 2, census_le_delta(rows, d), len(rows))
        if rep.status == "ok":
            applicable += 1
            assert rep.bound_holds_vs_census
        else:
            assert rep.bound_holds_vs_census is None
    assert applicable == 0
