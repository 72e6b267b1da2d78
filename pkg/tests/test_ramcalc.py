from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from towerlab.basic_field import TowerSpec
from towerlab.errors import BothWild, NotApplicable, NotPPower, WildIndex
from towerlab.ramcalc import (
    IDENTITY,
    N,
    RamStep,
    abhyankar,
    b_bounds,
    compose,
    cubic_bound,
    decimal_str,
    diagrams,
    dv_compare,
    dv_ratio_limit,
    figure_tables,
    floor_two_sqrt,
    genus_bound,
    genus_F2,
    genus_formula,
    gv_holds,
    gv_scan,
    harmonic_bound,
    hurwitz_genera,
    infinity_chain,
    limit_bounds,
    lm_bound,
    main_claim_identities,
    odd_degree_bound,
    prime_powers,
    prior_bounds_table,
    sig_digits,
    tame,
)
from towerlab.suites import ram_grid


def test_ramstep_invariant():
    with pytest.raises(ValueError):
        RamStep(3, 1)
    with pytest.raises(ValueError):
        RamStep(0, 0)
    assert RamStep(4, 6).is_tame(3) and not RamStep(4, 6).is_tame(2)


def test_tame_examples():
    assert tame(1, 2) == RamStep(1, 0)
    assert tame(7, 2) == RamStep(7, 6)
    with pytest.raises(WildIndex):
        tame(2, 2)


def test_compose_examples():
    s = RamStep(4, 10)
    assert compose(IDENTITY, s) == s and compose(s, IDENTITY) == s
    # d(V|[w=0]) at (q,j,k) = (2,1,2): N_n q^(n-1) - N_n - 1 = 20, via u and via x.
    v = diagrams(TowerSpec(2, 3, 1, 2))["V"]
    via_u = compose(tame(7, 2), RamStep(3, 2))
    via_x = compose(v.edges["top|x"], v.edges["x|w"])
    assert via_u == via_x == RamStep(21, 20)


def test_figure2_right_square_q3():
    spec = TowerSpec(3, 3, 1, 2)
    q, n, k = 3, 3, 2
    d = diagrams(spec)["P_gamma"]
    via_y = d.path(("top|y", "y|z"))
    via_u = d.path(("top|u", "u|z"))
    assert via_y.d == q**k * (q**n - 2) + q**n + q**k - 2
    assert via_u.d == (q**n - 1) * q**k + q**n - 2
    assert via_y == via_u


steps = st.builds(lambda e, extra: RamStep(e, e - 1 + extra), st.integers(1, 50), st.integers(0, 50))


@given(steps, steps, steps)
def test_compose_associative(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@given(st.integers(1, 200), st.integers(1, 200))
def test_tame_stays_tame(a, b):
    p = 2
    a, b = 2 * a - 1, 2 * b - 1
    c = compose(tame(a, p), tame(b, p))
    assert c.d == c.e - 1


def test_abhyankar():
    assert abhyankar(7, 4, 2) == 28
    assert abhyankar(3, 3, 2) == 3
    with pytest.raises(BothWild):
        abhyankar(2, 4, 2)


def test_figure_examples():
    spec = TowerSpec(2, 3, 1, 2)
    dg = diagrams(spec)
    assert dg["V"].multiplicity == 1 and dg["V"].edges["top|u"].e == 7
    assert dg["Q_delta"].edges["top|x"] == RamStep(2, 8)
    rep = figure_tables(TowerSpec(3, 5, 2, 3))
    assert len(rep.squares) == 6 and all(a == b for _, _, a, b in rep.squares)


@pytest.mark.parametrize("spec", ram_grid(), ids=lambda s: s.label())
def test_grid_consistency(spec):
    rep = figure_tables(spec)
    assert rep.checks.ok
    g = genus_F2(spec)
    assert all(h == g for h in hurwitz_genera(spec).values())


def test_genus_examples():
    assert genus_F2(TowerSpec(2, 2, 1, 1)) == 1
    assert genus_F2(TowerSpec(2, 3, 1, 2)) == 6
    assert genus_F2(TowerSpec(3, 5, 2, 3)) == 1325
    # Hurwitz over K(u) at (2,3,1,2): -14 + 18 + 6 = 10 = 2g - 2
    assert -2 * 7 + (1 + 2) * 6 + 1 * 6 == 2 * 6 - 2
    assert genus_formula(TowerSpec(2, 3, 1, 2)) == 6


def test_b_bounds():
    assert b_bounds(TowerSpec(2, 3, 1, 2)) == (Fraction(10, 3), Fraction(8))
    assert b_bounds(TowerSpec(2, 2, 1, 1)) == (4, 4)
    s = TowerSpec(3, 5, 2, 3)
    b0, binf = b_bounds(s)
    assert b0 != binf


def test_genus_bound_examples():
    assert genus_bound(TowerSpec(2, 3, 1, 2), 4) == Fraction(56, 3)
    assert genus_bound(TowerSpec(2, 2, 1, 1), 2) == 6
    for spec in ram_grid()[:10]:
        b0, binf = b_bounds(spec)
        assert genus_bound(spec, 1) == (b0 + binf) / 2 - 1 >= 0


def test_infinity_chain_attains_bound():
    rows = infinity_chain(TowerSpec(2, 3, 1, 2), 3)
    assert [(lv, s.e, s.d) for lv, s, _ in rows] == [(2, 2, 8), (3, 4, 24), (4, 8, 56)]
    assert all(ok for *_, ok in rows)


def test_main_claim_examples():
    rows = main_claim_identities(TowerSpec(2, 3, 1, 2), [1, 2, 4, 8, 16])
    assert len(rows) == 10
    assert all(r.equalities_hold and r.inequality_holds for r in rows)
    m1 = [r for r in rows if r.case == "m=1" and r.wild == 1][0]
    # no wild part: d(P~|P_1) = e0 - 1 + (q^(j-1) - 1) N_n = 2 at (2,3,1,2)
    assert m1.step == RamStep(3, 2)
    rows = main_claim_identities(TowerSpec(3, 5, 2, 3), [1, 3, 9])
    assert all(r.equalities_hold and r.inequality_holds for r in rows if r.case == "m>=2")
    with pytest.raises(NotPPower):
        main_claim_identities(TowerSpec(2, 3, 1, 2), [3])


def test_limit_bounds_examples():
    b = limit_bounds(TowerSpec(2, 3, 1, 2))
    assert b.lam == Fraction(3, 2) == b.odd_degree
    assert b.dv_verdict == "below-DV"
    assert limit_bounds(TowerSpec(2, 2, 1, 1)).dv_verdict == "meets-DV"
    assert decimal_str(dv_ratio_limit(2), 4) == "0.9428"


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_odd_degree_equals_harmonic(p, m):
    assert odd_degree_bound(p, m) == harmonic_bound(p, m, m + 1)
    assert dv_compare(odd_degree_bound(p, m), p ** (2 * m + 1)) == -1


def test_dv_compare_exact():
    assert dv_compare(Fraction(1), 4) == 0
    assert dv_compare(Fraction(2), 8) == 1  # (2+1)^2 = 9 > 8
    assert dv_compare(Fraction(3, 2), 8) == -1


def test_gv_scan():
    scan = gv_scan(10_000)
    assert scan.exceptions == [8, 27, 32, 125]
    assert scan.failing_squares == [4, 9, 16, 25]
    assert 343 in scan.original_form_exceptions
    assert gv_holds(6, 49) and 97**6 > 49**7
    assert not gv_holds(4, 25) and 49**4 < 25**5
    with pytest.raises(ValueError):
        gv_scan(100)


def test_prime_powers():
    assert [v for v, _, _ in prime_powers(64)] == [4, 8, 9, 16, 25, 27, 32, 49, 64]


def test_prior_bounds():
    assert floor_two_sqrt(8) == 5 and floor_two_sqrt(9) == 6
    assert lm_bound(3, 5) == 2
    with pytest.raises(NotApplicable):
        lm_bound(2, 3)
    assert cubic_bound(2) == Fraction(3, 2)
    rows = {r.name: r for r in prior_bounds_table(3, 5)}
    assert rows["odd-degree tower"].value == Fraction(208, 17)
    assert rows["odd q, prime n"].value == 2
    assert not rows["cubic tower"].applicable
    rows = {r.name: r for r in prior_bounds_table(2, 3)}
    assert rows["class field tower c*log2(ell)"].value == Fraction(1, 32)
    assert rows["cubic tower"].value == rows["odd-degree tower"].value


def test_display_helpers():
    assert sig_digits(Fraction(208, 17)) == "12.2353"
    assert N(2, 3) == 7
