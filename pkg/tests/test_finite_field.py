import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from towerlab.errors import (
    CapExceeded,
    DegreeZero,
    DivisionByZero,
    NonPrime,
    NoSuchSubfield,
    SpecMismatch,
)
from towerlab.finite_field import (
    FieldSpec,
    frobenius_q,
    is_irreducible,
    is_prime,
    least_irreducible,
    make_field,
    prime_power_exponent,
    sorted_felts,
    subfield_elements,
    trace_q,
)

SMALL = [(2, 1), (3, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (7, 1)]


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_least_irreducible_gf8_is_t3_t_1():
    # t^3 + t + 1, stored low degree first
    assert least_irreducible(2, 3) == (1, 1, 0, 1)
    assert make_field(2, 3).modulus == (1, 1, 0, 1)


def test_least_irreducible_examples():
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(3, 2) == (1, 0, 1)  # t^2 + 1
    assert least_irreducible(5, 1) == (0, 1)
    assert not is_irreducible((1, 0, 1), 2)  # (t+1)^2


@pytest.mark.parametrize("p,e", SMALL)
def test_tables_match_schoolbook(p, e):
    f = make_field(p, e)
    for a in range(f.size):
        for b in range(f.size):
            assert f._mul(a, b) == f.slow_mul(a, b)
            assert f._add(a, b) == f.slow_add(a, b)


@pytest.mark.parametrize("p,e", SMALL)
def test_inverse_and_primitive(p, e):
    f = make_field(p, e)
    for x in f.nonzero():
        assert x * x.inverse() == 1
    g = f.primitive
    seen = {(g**i).value for i in range(f.order)}
    assert len(seen) == f.order


def test_division_by_zero():
    f = make_field(3, 2)
    with pytest.raises(DivisionByZero):
        f.one / f.zero
    with pytest.raises(ZeroDivisionError):
        f.zero.inverse()


def test_constructor_errors():
    with pytest.raises(NonPrime):
        make_field(4, 1)
    with pytest.raises(DegreeZero):
        make_field(2, 0)
    with pytest.raises(CapExceeded):
        make_field(2, 21)
    with pytest.raises(ValueError):
        FieldSpec(2, 2, (1, 0, 1))


def test_mixed_fields_rejected():
    a, b = make_field(2, 3).one, make_field(2, 2).one
    with pytest.raises(SpecMismatch):
        a + b


def test_encode_parse_roundtrip():
    f = make_field(3, 2)
    assert [x.encode() for x in f.elements()][:4] == ["GF(3^2):00", "GF(3^2):01", "GF(3^2):02", "GF(3^2):10"]
    for x in f.elements():
        assert f.parse(x.encode()) == x
    big = make_field(11, 2)
    x = big.from_coeffs([3, 10])
    assert x.encode() == "GF(11^2):10.3"
    assert big.parse("GF(11^2):10.3") == x
    with pytest.raises(SpecMismatch):
        f.parse("GF(2^3):001")


def test_pow_reduces_exponent():
    f = make_field(2, 4)
    for x in f.nonzero():
        assert x ** f.order == 1
        assert x ** (f.order + 3) == x**3
    assert f.zero**0 == 1
    assert f.zero**5 == 0


def test_frobenius_table_matches_pow():
    f = make_field(3, 3)
    tab = f.frobenius_table(3)
    assert all(tab[x.value] == (x**3).value for x in f.elements())


def test_subfields_by_fixed_points():
    f = make_field(2, 6)
    assert len(subfield_elements(f, 2, 1)) == 2
    assert len(subfield_elements(f, 2, 2)) == 4
    assert len(subfield_elements(f, 2, 3)) == 8
    assert len(subfield_elements(f, 4, 3)) == 64
    with pytest.raises(NoSuchSubfield):
        subfield_elements(f, 2, 4)


def test_trace_lands_in_base_and_is_surjective():
    f = make_field(2, 6)
    base = subfield_elements(f, 4, 1)
    images = {trace_q(x, 4, 3) for x in f.elements()}
    assert images == base
    with pytest.raises(NoSuchSubfield):
        trace_q(make_field(2, 3).one, 4, 1)
    with pytest.raises(SpecMismatch):
        trace_q(f.one, 3, 1)


def test_prime_power_exponent():
    assert prime_power_exponent(8, 2) == 3
    with pytest.raises(ValueError):
        prime_power_exponent(12, 2)


def test_sorted_felts_canonical():
    f = make_field(2, 3)
    xs = list(f.elements())[::-1]
    assert [x.value for x in sorted_felts(xs)] == list(range(8))


FIELDS = [make_field(p, e) for p, e in [(2, 4), (3, 2), (5, 2), (2, 6)]]


@st.composite
def triples(draw):
    f = draw(st.sampled_from(FIELDS))
    v = st.integers(0, f.size - 1)
    return f.from_index(draw(v)), f.from_index(draw(v)), f.from_index(draw(v))


@settings(max_examples=200, deadline=None)
@given(triples())
def test_field_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    assert a + (-a) == 0


@settings(max_examples=200, deadline=None)
@given(triples())
def test_frobenius_is_additive_and_multiplicative(t):
    a, b, _ = t
    p = a.field.p
    assert frobenius_q(a + b, p) == frobenius_q(a, p) + frobenius_q(b, p)
    assert frobenius_q(a * b, p) == frobenius_q(a, p) * frobenius_q(b, p)


@settings(max_examples=100, deadline=None)
@given(triples())
def test_trace_is_linear_over_base(t):
    a, b, _ = t
    f = a.field
    p = f.p
    c = f(3)  # prime-field scalar
    assert trace_q(a + b, p, f.e) == trace_q(a, p, f.e) + trace_q(b, p, f.e)
    assert trace_q(c * a, p, f.e) == c * trace_q(a, p, f.e)
