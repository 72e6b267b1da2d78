import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from towerlab.basic_field import (
    PointPair,
    TowerSpec,
    defining_lhs,
    fiber,
    is_point,
    kummer_check,
    recover_u,
    wz_map,
)
from towerlab.errors import ValidationError, ZeroArgument
from towerlab.finite_field import trace_q


def brute_fiber(spec, beta):
    return [y for y in beta.field.nonzero() if defining_lhs(spec, beta, y) == 1]


@pytest.mark.parametrize(
    "args,msg",
    [
        ((2, 4, 2, 2), "gcd(j,k) must be 1"),
        ((2, 3, 1, 1), "n must equal j + k"),
        ((6, 3, 1, 2), "prime power"),
        ((2, 3, 0, 3), "positive"),
    ],
)
def test_spec_validation_messages(args, msg):
    with pytest.raises(ValidationError, match=msg.replace("(", r"\(").replace(")", r"\)").replace("+", r"\+")):
        TowerSpec(*args)


def test_spec_swaps_when_p_divides_j():
    s = TowerSpec(2, 3, 2, 1)
    assert (s.j, s.k) == (1, 2)
    s = TowerSpec(3, 4, 3, 1)
    assert (s.j, s.k) == (1, 3)


def test_spec_derived_values():
    s = TowerSpec(3, 5, 2, 3)
    assert s.p == 3 and s.q_exponent == 1 and s.ell == 243
    assert s.alpha == 2  # 1/2 mod 3
    assert [s.N(r) for r in (1, 2, 3)] == [1, 4, 13]
    t = TowerSpec.from_prime(2, 3, 1, 2, q_exponent=2)
    assert t.q == 4 and t.ell_field.size == 64
    with pytest.raises(ValidationError):
        TowerSpec.from_prime(4, 3, 1, 2)


def test_gf8_every_fiber_has_four_points():
    spec = TowerSpec(2, 3, 1, 2)
    for beta in spec.ell_field.nonzero():
        assert len(fiber(spec, beta)) == 4


@pytest.mark.parametrize("t,m", [((2, 3, 1, 2), 1), ((2, 3, 1, 2), 2), ((3, 2, 1, 1), 2), ((2, 2, 1, 1), 3), ((4, 3, 1, 2), 1)])
def test_fast_fiber_matches_brute_force(t, m):
    spec = TowerSpec(*t)
    f = spec.extension_field(m)
    for beta in list(f.nonzero())[:40]:
        assert fiber(spec, beta) == brute_fiber(spec, beta)


def test_fiber_zero_rejected():
    spec = TowerSpec(2, 3, 1, 2)
    with pytest.raises(ZeroArgument):
        fiber(spec, spec.ell_field.zero)
    with pytest.raises(ZeroArgument):
        defining_lhs(spec, spec.ell_field.zero, spec.ell_field.one)


def test_is_point_rejects_zero_y():
    spec = TowerSpec(2, 2, 1, 1)
    f = spec.ell_field
    assert not is_point(spec, f.one, f.zero)


@pytest.mark.parametrize("t", [(2, 2, 1, 1), (2, 3, 1, 2), (3, 2, 1, 1)])
def test_u_unique_and_kummer_over_gf_ell(t):
    spec = TowerSpec(*t)
    for x in spec.ell_field.nonzero():
        for y in fiber(spec, x):
            pt = PointPair(x, y)
            assert pt.is_valid(spec)
            u = recover_u(spec, pt)
            assert trace_q(u, spec.q, spec.k) + spec.alpha == pt.R(spec)
            assert trace_q(u, spec.q, spec.j) == -pt.S(spec)
            assert kummer_check(spec, pt, u).ok
            w, z = wz_map(spec, pt, u)
            assert w == -(x ** (spec.ell - 1))


def test_z_is_minus_one_over_gf_ell():
    spec = TowerSpec(2, 3, 1, 2)
    for x in spec.ell_field.nonzero():
        for y in fiber(spec, x):
            assert wz_map(spec, PointPair(x, y)) == (-1, -1)


def test_wz_zero_argument():
    spec = TowerSpec(2, 3, 1, 2)
    f = spec.ell_field
    with pytest.raises(ZeroArgument):
        wz_map(spec, PointPair(f.zero, f.one))


EXT = TowerSpec(2, 3, 1, 2)
EXT_FIELD = EXT.extension_field(2)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, EXT_FIELD.size - 1))
def test_points_over_gf64_satisfy_kummer(v):
    x = EXT_FIELD.from_index(v)
    for y in fiber(EXT, x):
        pt = PointPair(x, y)
        assert kummer_check(EXT, pt, recover_u(EXT, pt)).ok
