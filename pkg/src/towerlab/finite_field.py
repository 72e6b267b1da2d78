"""
Exact arithmetic in small finite fields GF(p^e).

Elements are stored as a packed integer: the coefficient vector
``(c_0, ..., c_{e-1})`` in the power basis of the modulus is read as the
base-``p`` number ``c_0 + c_1 p + ... + c_{e-1} p^{e-1}``.  Integer order on
this packing is the canonical element order (it is lexicographic on the
big-endian digit string used for the textual encoding).

Multiplication, inversion and addition go through exp/log/Zech tables built
once per field from schoolbook polynomial arithmetic.  The schoolbook path is
kept as :meth:`FieldSpec.slow_mul` so tests can check the tables against it.
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from towerlab.errors import (
    CapExceeded,
    DegreeZero,
    DivisionByZero,
    NonPrime,
    NoSuchSubfield,
    SpecMismatch,
)

#: Largest field cardinality the library will build tables for.
ENUMERATION_CAP = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power_exponent(q: int, p: int) -> int:
    """Return ``e`` with ``q == p**e`` (e >= 1), or raise ValueError."""
    if q < p:
        raise ValueError(f"{q} is not a positive power of {p}")
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    if q != 1:
        raise ValueError(f"not a power of {p}")
    return e


# -- coefficient-list polynomial helpers over GF(p) (low degree first) -------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    r = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(r) - 1 >= dm:
        c = r[-1] * inv_lead % p
        shift = len(r) - 1 - dm
        for i, mi in enumerate(m):
            r[shift + i] = (r[shift + i] - c * mi) % p
        _trim(r)
    return r


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _digits(v: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        v, r = divmod(v, p)
        out.append(r)
    return out


def _pack(c: Sequence[int], p: int) -> int:
    v = 0
    for ci in reversed(c):
        v = v * p + ci
    return v


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    e = len(modulus) - 1
    for d in range(1, e // 2 + 1):
        for low in range(p**d):
            f = _digits(low, p, d) + [1]
            if not _poly_mod(modulus, f, p):
                return False
    return True


def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    # Candidates ordered by the packed value of their lower coefficients.
    for low in range(p**e):
        m = _digits(low, p, e) + [1]
        if is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FieldSpec:
    """A concrete model of GF(p^e): ``GF(p)[t] / (modulus)``."""

    def __init__(self, p: int, e: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise NonPrime(p)
        if e < 1:
            raise DegreeZero(e)
        if p**e > ENUMERATION_CAP:
            raise CapExceeded(f"GF({p}^{e}) exceeds cap {ENUMERATION_CAP}")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree e")
        if not is_irreducible(modulus, p):
            raise ValueError("modulus is reducible")
        self.p = p
        self.e = e
        self.modulus = modulus
        self.size = p**e
        self.order = self.size - 1

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})"

    @property
    def tag(self) -> str:
        return f"GF({self.p}^{self.e})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.e, self.modulus))

    def __reduce__(self):
        return (FieldSpec, (self.p, self.e, self.modulus))

    # -- schoolbook arithmetic (table-free oracle) ----------------------------

    def slow_mul(self, a: int, b: int) -> int:
        prod = _poly_mul(_trim(_digits(a, self.p, self.e)),
                         _trim(_digits(b, self.p, self.e)), self.p)
        return _pack(_poly_mod(prod, self.modulus, self.p), self.p)

    def slow_add(self, a: int, b: int) -> int:
        p = self.p
        da, db = _digits(a, p, self.e), _digits(b, p, self.e)
        return _pack([(x + y) % p for x, y in zip(da, db)], p)

    def slow_pow(self, a: int, k: int) -> int:
        result = 1
        while k:
            if k & 1:
                result = self.slow_mul(result, a)
            a = self.slow_mul(a, a)
            k >>= 1
        return result

    # -- tables ----------------------------------------------------------------

    @cached_property
    def _tables(self) -> tuple[list[int], list[int], list[int]]:
        order = self.order
        if order == 1:  # GF(2)
            return [1], [0, 0], [-1]
        factors = prime_factors(order)
        g = next(c for c in range(2, self.size)
                 if all(self.slow_pow(c, order // r) != 1 for r in factors))
        exp = [0] * order
        log = [0] * self.size
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self.slow_mul(x, g)
        p = self.p
        zech = [0] * order
        for i, s in enumerate(exp):
            c0 = s % p
            s1 = s - c0 + (c0 + 1) % p
            zech[i] = -1 if s1 == 0 else log[s1]
        return exp, log, zech

    @property
    def primitive(self) -> "Felt":
        exp = self._tables[0]
        return Felt(self, exp[1] if self.order > 1 else 1)

    def _mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        exp, log, _ = self._tables
        return exp[(log[a] + log[b]) % self.order]

    def _add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        exp, log, zech = self._tables
        la = log[a]
        z = zech[(log[b] - la) % self.order]
        if z < 0:
            return 0
        return exp[(la + z) % self.order]

    def _neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        exp, log, _ = self._tables
        return exp[(log[a] + self.order // 2) % self.order]

    def _inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        exp, log, _ = self._tables
        return exp[-log[a] % self.order]

    def _pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self._inv(a), -k
        if a == 0:
            return 1 if k == 0 else 0
        # Fermat: reduce exponent, then square-and-multiply.
        k %= self.order
        result = 1
        while k:
            if k & 1:
                result = self._mul(result, a)
            a = self._mul(a, a)
            k >>= 1
        return result

    @lru_cache(maxsize=None)
    def frobenius_table(self, q: int) -> list[int]:
        """Packed values of v^q for every packed v."""
        prime_power_exponent(q, self.p)
        return [self._pow(v, q) for v in range(self.size)]

    # -- element construction ----------------------------------------------------

    def __call__(self, value: "int | Felt") -> "Felt":
        """Prime-field constant ``value mod p`` (or pass a Felt of this field through)."""
        if isinstance(value, Felt):
            _check(self, value)
            return value
        return Felt(self, int(value) % self.p)

    def from_index(self, index: int) -> "Felt":
        if not 0 <= index < self.size:
            raise ValueError("index out of range")
        return Felt(self, index)

    def from_coeffs(self, coeffs: Sequence[int]) -> "Felt":
        c = [int(x) % self.p for x in coeffs]
        if len(c) > self.e:
            c = _poly_mod(c, self.modulus, self.p)
        return Felt(self, _pack(c, self.p))

    @property
    def zero(self) -> "Felt":
        return Felt(self, 0)

    @property
    def one(self) -> "Felt":
        return Felt(self, 1)

    @property
    def gen(self) -> "Felt":
        """The class of ``t`` (not necessarily primitive)."""
        return self.from_coeffs([0, 1])

    def elements(self) -> Iterator["Felt"]:
        for v in range(self.size):
            yield Felt(self, v)

    def nonzero(self) -> Iterator["Felt"]:
        for v in range(1, self.size):
            yield Felt(self, v)

    def parse(self, text: str) -> "Felt":
        tag, _, digits = text.partition(":")
        if tag != self.tag:
            raise SpecMismatch(f"{tag} is not {self.tag}")
        parts = digits.split(".") if "." in digits else list(digits)
        return self.from_coeffs([int(d) for d in reversed(parts)])


class Felt:
    """An element of a :class:`FieldSpec`."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value: int):
        self.field = field
        self.value = value

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(_digits(self.value, self.field.p, self.field.e))

    def encode(self) -> str:
        """Canonical text: field tag plus big-endian coefficient digits."""
        d = reversed(self.coeffs)
        sep = "" if self.field.p <= 10 else "."
        return f"{self.field.tag}:" + sep.join(str(c) for c in d)

    def __repr__(self) -> str:
        return self.encode()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Felt):
            return self.value == other.value and self.field == other.field
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.e, self.value))

    def __lt__(self, other: "Felt") -> bool:
        _check(self.field, other)
        return self.value < other.value

    def __bool__(self) -> bool:
        return self.value != 0

    def _coerce(self, other: "Felt | int") -> int:
        if isinstance(other, Felt):
            _check(self.field, other)
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        raise TypeError(f"cannot combine Felt with {type(other).__name__}")

    def __add__(self, other):
        return Felt(self.field, self.field._add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __neg__(self):
        return Felt(self.field, self.field._neg(self.value))

    def __sub__(self, other):
        f = self.field
        return Felt(f, f._add(self.value, f._neg(self._coerce(other))))

    def __rsub__(self, other):
        f = self.field
        return Felt(f, f._add(self._coerce(other), f._neg(self.value)))

    def __mul__(self, other):
        return Felt(self.field, self.field._mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def inverse(self) -> "Felt":
        return Felt(self.field, self.field._inv(self.value))

    def __truediv__(self, other):
        f = self.field
        return Felt(f, f._mul(self.value, f._inv(self._coerce(other))))

    def __rtruediv__(self, other):
        f = self.field
        return Felt(f, f._mul(self._coerce(other), f._inv(self.value)))

    def __pow__(self, k: int):
        return Felt(self.field, self.field._pow(self.value, int(k)))


def _check(field: FieldSpec, x: Felt) -> None:
    if x.field is not field and x.field != field:
        raise SpecMismatch(f"{x.field!r} element used in {field!r}")


@lru_cache(maxsize=None)
def make_field(p: int, e: int) -> FieldSpec:
    """GF(p^e) modelled with the least monic irreducible modulus of degree e.

    Candidate moduli are ordered by their packed lower coefficients, so for
    p=2, e=3 the modulus is ``t^3 + t + 1``.
    """
    if not is_prime(p):
        raise NonPrime(p)
    if e < 1:
        raise DegreeZero(e)
    if p**e > ENUMERATION_CAP:
        raise CapExceeded(f"GF({p}^{e}) exceeds cap {ENUMERATION_CAP}")
    return FieldSpec(p, e, least_irreducible(p, e))


def _q_exponent(field: FieldSpec, q: int) -> int:
    try:
        return prime_power_exponent(q, field.p)
    except ValueError:
        raise SpecMismatch(f"q={q} is not a power of p={field.p}") from None


def frobenius_q(x: Felt, q: int) -> Felt:
    """x^q."""
    _q_exponent(x.field, q)
    return x ** q


def trace_q(x: Felt, q: int, a: int) -> Felt:
    """Tr_a(x) = x + x^q + ... + x^(q^(a-1))."""
    e0 = _q_exponent(x.field, q)
    if x.field.e % e0:
        raise NoSuchSubfield(f"GF({q}) is not a subfield of {x.field!r}")
    if a < 1:
        raise ValueError("trace length must be positive")
    f = x.field
    acc = v = x.value
    for _ in range(a - 1):
        v = f._pow(v, q)
        acc = f._add(acc, v)
    return Felt(f, acc)


def subfield_elements(field: FieldSpec, q: int, a: int) -> frozenset[Felt]:
    """The copy of GF(q^a) inside ``field``: all x with x^(q^a) = x."""
    e0 = _q_exponent(field, q)
    if a < 1 or field.e % (e0 * a):
        raise NoSuchSubfield(f"GF({q}^{a}) does not embed in {field!r}")
    qa = q**a
    return frozenset(x for x in field.elements() if x ** qa == x)


def enumerate_field(field: FieldSpec) -> list[Felt]:
    """All elements in canonical order; the first one is 0."""
    if field.size > ENUMERATION_CAP:  # pragma: no cover - FieldSpec enforces it
        raise CapExceeded(field.size)
    return list(field.elements())


def sorted_felts(xs: Iterable[Felt]) -> list[Felt]:
    return sorted(xs, key=lambda x: x.value)
