"""
Pointwise model of the basic function field K(x, y) cut out by

    Tr_j(y / x^(q^k)) + Tr_k(y^(q^j) / x) = 1.

Points are pairs of nonzero field values.  Everything here is exhaustive
search over a small field; the ramified locus (x = 0 or x = infinity) is
handled symbolically in :mod:`towerlab.ramcalc`, never numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd

from towerlab.errors import (
    Ambiguous,
    DegenerateDenominator,
    IdentityViolation,
    NoSolution,
    ValidationError,
    ZeroArgument,
)
from towerlab.finite_field import (
    FieldSpec,
    Felt,
    is_prime,
    make_field,
    prime_factors,
    trace_q,
)


@dataclass(frozen=True)
class TowerSpec:
    """Tower parameters: q, and a coprime partition n = j + k.

    If p divides j the two parts are swapped on construction, so that
    alpha = 1/j exists in the prime field.
    """

    q: int
    n: int
    j: int
    k: int

    def __post_init__(self):
        q, n, j, k = self.q, self.n, self.j, self.k
        facs = prime_factors(q) if q >= 2 else []
        if len(facs) != 1 or not is_prime(facs[0]):
            raise ValidationError("q must be a prime power")
        if j < 1 or k < 1:
            raise ValidationError("j and k must be positive")
        if n != j + k:
            raise ValidationError("n must equal j + k")
        if n < 2:
            raise ValidationError("n must be at least 2")
        if gcd(j, k) != 1:
            raise ValidationError("gcd(j,k) must be 1")
        if j % facs[0] == 0:
            object.__setattr__(self, "j", k)
            object.__setattr__(self, "k", j)

    @classmethod
    def from_prime(cls, p: int, n: int, j: int, k: int, q_exponent: int = 1) -> "TowerSpec":
        if not is_prime(p):
            raise ValidationError("p must be prime")
        if q_exponent < 1:
            raise ValidationError("q-exponent must be positive")
        return cls(p**q_exponent, n, j, k)

    @property
    def p(self) -> int:
        return prime_factors(self.q)[0]

    @property
    def q_exponent(self) -> int:
        e, q = 0, self.q
        while q > 1:
            q //= self.p
            e += 1
        return e

    @property
    def ell(self) -> int:
        return self.q**self.n

    @property
    def alpha(self) -> int:
        """1/j in the prime field, as an integer residue."""
        return pow(self.j, -1, self.p)

    def N(self, r: int) -> int:
        return (self.q**r - 1) // (self.q - 1)

    @cached_property
    def field_q(self) -> FieldSpec:
        return make_field(self.p, self.q_exponent)

    @cached_property
    def ell_field(self) -> FieldSpec:
        return make_field(self.p, self.q_exponent * self.n)

    def extension_field(self, m: int) -> FieldSpec:
        """GF(ell^m); m = 2 gives the quadratic extension used for non-vacuous z checks."""
        return make_field(self.p, self.q_exponent * self.n * m)

    def label(self) -> str:
        return f"q={self.q},n={self.n},j={self.j},k={self.k}"


@dataclass(frozen=True)
class PointPair:
    """A pair (x, y) of nonzero values; valid when it satisfies the defining equation."""

    x: Felt
    y: Felt

    def __iter__(self):
        return iter((self.x, self.y))

    def R(self, spec: "TowerSpec") -> Felt:
        return R_of(spec, self.x, self.y)

    def S(self, spec: "TowerSpec") -> Felt:
        return S_of(spec, self.x, self.y)

    def is_valid(self, spec: "TowerSpec") -> bool:
        return is_point(spec, self.x, self.y)


def _tr(spec: TowerSpec, v: Felt, a: int) -> Felt:
    return trace_q(v, spec.q, a)


def R_of(spec: TowerSpec, x: Felt, y: Felt) -> Felt:
    return y / x ** (spec.q**spec.k)


def S_of(spec: TowerSpec, x: Felt, y: Felt) -> Felt:
    return y ** (spec.q**spec.j) / x


def defining_lhs(spec: TowerSpec, x: Felt, y: Felt) -> Felt:
    """Left-hand side of the defining equation; the equation holds iff this is 1."""
    if not x:
        raise ZeroArgument("x = 0 lies on the ramified locus")
    return _tr(spec, R_of(spec, x, y), spec.j) + _tr(spec, S_of(spec, x, y), spec.k)


def is_point(spec: TowerSpec, x: Felt, y: Felt) -> bool:
    return bool(x) and bool(y) and defining_lhs(spec, x, y) == 1


def fiber(spec: TowerSpec, beta: Felt) -> list[Felt]:
    """All y in beta's field with (beta, y) on the curve, in canonical order.

    Exhaustive search over every nonzero y, evaluated on packed integers.
    """
    if not beta:
        raise ZeroArgument("beta = 0 is ramified, not split")
    f = beta.field
    trace_q(f.one, spec.q, 1)  # field must contain GF(q)
    frob = f.frobenius_table(spec.q)
    mul, add = f._mul, f._add
    a = f._inv(f._pow(beta.value, spec.q**spec.k))
    b = f._inv(beta.value)
    j, k = spec.j, spec.k
    out = []
    for y in range(1, f.size):
        acc = v = mul(y, a)
        for _ in range(j - 1):
            v = frob[v]
            acc = add(acc, v)
        v = y
        for _ in range(j):
            v = frob[v]
        v = mul(v, b)
        acc = add(acc, v)
        for _ in range(k - 1):
            v = frob[v]
            acc = add(acc, v)
        if acc == 1:
            out.append(Felt(f, y))
    return out


@lru_cache(maxsize=None)
def _trace_pairs(spec: TowerSpec, field: FieldSpec) -> dict[tuple[int, int], list[Felt]]:
    table: dict[tuple[int, int], list[Felt]] = {}
    for u in field.elements():
        key = (_tr(spec, u, spec.k).value, _tr(spec, u, spec.j).value)
        table.setdefault(key, []).append(u)
    return table


def recover_u(spec: TowerSpec, pt: PointPair) -> Felt:
    """The unique u with Tr_k(u) + alpha = R and Tr_j(u) = -S (exhaustive search)."""
    x, y = pt
    field = x.field
    R, S = R_of(spec, x, y), S_of(spec, x, y)
    key = ((R - spec.alpha).value, (-S).value)
    found = _trace_pairs(spec, field).get(key, [])
    if not found:
        raise NoSolution(f"no u in {field!r} for x={x}, y={y}")
    if len(found) > 1:
        raise Ambiguous(f"{len(found)} candidates for u at x={x}, y={y}")
    return found[0]


@dataclass(frozen=True)
class KummerReport:
    x_relation: bool
    y_relation: bool

    @property
    def ok(self) -> bool:
        return self.x_relation and self.y_relation


def _denominator(spec: TowerSpec, u: Felt) -> Felt:
    d = _tr(spec, u, spec.k) + spec.alpha
    if not d:
        raise DegenerateDenominator("Tr_k(u) + alpha = 0")
    return d


def kummer_check(spec: TowerSpec, pt: PointPair, u: Felt) -> KummerReport:
    """Check x^(q^n-1) and y^(q^n-1) against their expressions in u."""
    x, y = pt
    den = _denominator(spec, u)
    trj = _tr(spec, u, spec.j)
    qn, qj, qk = spec.q**spec.n, spec.q**spec.j, spec.q**spec.k
    return KummerReport(
        x_relation=x ** (qn - 1) == -trj / den**qj,
        y_relation=y ** (qn - 1) == -(trj**qk) / den,
    )


def wz_map(spec: TowerSpec, pt: PointPair, u: Felt | None = None) -> tuple[Felt, Felt]:
    """(w, z) = (-x^(q^n-1), -y^(q^n-1)), cross-checked against their u-expressions."""
    x, y = pt
    if not x or not y:
        raise ZeroArgument("w and z need nonzero x, y")
    if u is None:
        u = recover_u(spec, pt)
    qn, qj, qk = spec.q**spec.n, spec.q**spec.j, spec.q**spec.k
    w, z = -(x ** (qn - 1)), -(y ** (qn - 1))
    den = _denominator(spec, u)
    trj = _tr(spec, u, spec.j)
    if w != trj / den**qj:
        raise IdentityViolation(f"w-u relation fails at x={x}, y={y}")
    if z != trj**qk / den:
        raise IdentityViolation(f"z-u relation fails at x={x}, y={y}")
    return w, z
