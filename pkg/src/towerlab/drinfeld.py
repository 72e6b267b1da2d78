"""
Twisted (Ore) polynomials L{tau} with tau*c = c^q*tau, and normalized
Drinfeld modules  phi_T = -tau^n + g tau^j + 1  of characteristic T - 1.

The isogenies studied here are lambda = tau^k - a with k = n - j.  With
a = X^(q^k - 1) and c in GF(q^k) every

    g = (X^(q^n-1) + c) / X^(q^j-1),   h = (X^(q^n-1) + c) / X^(q^n-q^k)

gives an isogeny phi -> psi; c = -1 is the case where X is a T-torsion point.
All checks run in a working field containing GF(q^n) and GF(q^k), normally
GF(q^(nk)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import comb, gcd
from typing import Iterable, Sequence

from towerlab.basic_field import TowerSpec
from towerlab.errors import (
    DefectNonzero,
    DegenerateZ,
    IdentityViolation,
    SpecMismatch,
    ValidationError,
    ZeroArgument,
    ZeroDivisor,
)
from towerlab.finite_field import (
    FieldSpec,
    Felt,
    make_field,
    prime_factors,
    prime_power_exponent,
    subfield_elements,
)


# -- Ore polynomials -----------------------------------------------------------------

class OrePoly:
    """sum a_i tau^i over ``field``, twist x -> x^q.  Immutable."""

    __slots__ = ("field", "q", "coeffs")

    def __init__(self, field: FieldSpec, q: int, coeffs: Iterable[Felt | int] = ()):
        prime_power_exponent(q, field.p)
        cs = [field(c) if isinstance(c, int) else c for c in coeffs]
        for c in cs:
            if c.field != field:
                raise SpecMismatch("coefficient outside the working field")
        while cs and not cs[-1]:
            cs.pop()
        self.field, self.q, self.coeffs = field, q, tuple(cs)

    @classmethod
    def tau(cls, field: FieldSpec, q: int, i: int = 1) -> "OrePoly":
        return cls(field, q, [0] * i + [1])

    @classmethod
    def const(cls, field: FieldSpec, q: int, c: Felt | int) -> "OrePoly":
        return cls(field, q, [c])

    @property
    def degree(self) -> int:
        """tau-degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coeff(self, i: int) -> Felt:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def D(self) -> Felt:
        """Constant term a_0."""
        return self.coeff(0)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "OrePoly(0)"
        terms = [f"{c}*t^{i}" for i, c in enumerate(self.coeffs) if c]
        return "OrePoly(" + " + ".join(terms) + ")"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrePoly):
            return NotImplemented
        return (self.field, self.q, self.coeffs) == (other.field, other.q, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.field, self.q, self.coeffs))

    def _same(self, other: "OrePoly") -> None:
        if self.field != other.field or self.q != other.q:
            raise SpecMismatch("Ore polynomials over different rings")

    def _lift(self, other) -> "OrePoly":
        if isinstance(other, OrePoly):
            self._same(other)
            return other
        if isinstance(other, (int, Felt)):
            return OrePoly.const(self.field, self.q, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        m = max(len(self.coeffs), len(other.coeffs))
        return OrePoly(self.field, self.q, [self.coeff(i) + other.coeff(i) for i in range(m)])

    __radd__ = __add__

    def __neg__(self) -> "OrePoly":
        return OrePoly(self.field, self.q, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Composition: (sum a_i tau^i)(sum b_j tau^j) = sum a_i b_j^(q^i) tau^(i+j)."""
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self or not other:
            return OrePoly(self.field, self.q)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            qi = self.q**i
            for jj, b in enumerate(other.coeffs):
                if b:
                    out[i + jj] = out[i + jj] + a * b**qi
        return OrePoly(self.field, self.q, out)

    def __rmul__(self, other):
        lifted = self._lift(other)
        if lifted is NotImplemented:
            return lifted
        return lifted * self

    def __pow__(self, k: int) -> "OrePoly":
        out = OrePoly.const(self.field, self.q, 1)
        for _ in range(k):
            out = out * self
        return out

    def apply(self, x: Felt) -> Felt:
        """The additive map x -> sum a_i x^(q^i)."""
        if x.field != self.field:
            raise SpecMismatch("point outside the working field")
        acc, v = self.field.zero, x
        for i, a in enumerate(self.coeffs):
            if i:
                v = v**self.q
            acc = acc + a * v
        return acc

    def right_divmod(self, d: "OrePoly") -> tuple["OrePoly", "OrePoly"]:
        """(quotient, remainder) with self = quotient*d + remainder, deg remainder < deg d."""
        self._same(d)
        if not d:
            raise ZeroDivisor("division by the zero Ore polynomial")
        r = d.degree
        lead = d.coeffs[-1]
        quot = [self.field.zero] * max(self.degree - r + 1, 0)
        rem = self
        while rem.degree >= r:
            s = rem.degree - r
            c = rem.coeffs[-1] / lead ** (self.q**s)
            quot[s] = c
            rem = rem - OrePoly(self.field, self.q, [0] * s + [c]) * d
        return OrePoly(self.field, self.q, quot), rem


def ore_mul(f: OrePoly, g: OrePoly) -> OrePoly:
    return f * g


def ore_right_divmod(f: OrePoly, d: OrePoly) -> tuple[OrePoly, OrePoly]:
    return f.right_divmod(d)


def apply(f: OrePoly, x: Felt) -> Felt:
    return f.apply(x)


# -- polynomials in T over GF(q), coefficients stored as field elements --------------

TPoly = tuple  # low degree first, entries are Felt in the working field


def _tp_trim(c: list[Felt]) -> TPoly:
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def tpoly(field: FieldSpec, coeffs: Sequence[int | Felt]) -> TPoly:
    return _tp_trim([field(c) if isinstance(c, int) else c for c in coeffs])


def tpoly_mul(a: TPoly, b: TPoly) -> TPoly:
    if not a or not b:
        return ()
    out = [a[0].field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _tp_trim(out)


def tpoly_divmod(a: TPoly, b: TPoly) -> tuple[TPoly, TPoly]:
    if not b:
        raise ZeroDivisor("division by the zero polynomial")
    rem = list(a)
    quot = [b[0].field.zero] * max(len(a) - len(b) + 1, 0)
    while len(rem) >= len(b):
        c = rem[-1] / b[-1]
        s = len(rem) - len(b)
        quot[s] = c
        for i, y in enumerate(b):
            rem[s + i] = rem[s + i] - c * y
        rem = list(_tp_trim(rem))
    return _tp_trim(quot), tuple(rem)


def pk_poly(q: int, k: int, field: FieldSpec | None = None) -> TPoly:
    """(T - 1)^N_k - (-1)^k, coefficients in GF(q) (default: the prime field)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    field = field or make_field(prime_factors(q)[0], 1)
    Nk = (q**k - 1) // (q - 1)
    c = [comb(Nk, i) * (-1) ** (Nk - i) for i in range(Nk + 1)]
    c[0] -= (-1) ** k
    return tpoly(field, [v % field.p for v in c])


def pk_product(q: int, k: int, field: FieldSpec) -> TPoly:
    """prod (T - 1 + beta) over beta in (GF(q^k)^x)^(q-1), computed in ``field``."""
    sub = subfield_elements(field, q, k)
    betas = sorted({b ** (q - 1) for b in sub if b}, key=lambda x: x.value)
    out: TPoly = (field.one,)
    for b in betas:
        out = tpoly_mul(out, (b - 1, field.one))
    return out


def monic_polys(field: FieldSpec, q: int, max_degree: int) -> Iterable[TPoly]:
    """All monic polynomials over GF(q) (inside ``field``) of degree <= max_degree."""
    base = sorted(subfield_elements(field, q, 1), key=lambda x: x.value)
    for d in range(max_degree + 1):
        for lower in product(base, repeat=d):
            yield tuple(lower) + (field.one,)


# -- Drinfeld modules ------------------------------------------------------------------

@dataclass(frozen=True)
class DrinfeldModule:
    q: int
    n: int
    j: int
    g: Felt

    def __post_init__(self):
        if not 1 <= self.j < self.n:
            raise ValidationError("need 1 <= j < n")
        if gcd(self.n, self.j) != 1:
            raise ValidationError("gcd(n,j) must be 1")
        prime_power_exponent(self.q, self.g.field.p)

    @property
    def k(self) -> int:
        return self.n - self.j

    @property
    def field(self) -> FieldSpec:
        return self.g.field

    @cached_property
    def phi_T(self) -> OrePoly:
        f, q = self.field, self.q
        return OrePoly(f, q, [1] + [0] * (self.j - 1) + [self.g] + [0] * (self.k - 1) + [-f.one])

    @property
    def supersingular(self) -> bool:
        return not self.g

    def with_g(self, g: Felt) -> "DrinfeldModule":
        return DrinfeldModule(self.q, self.n, self.j, g)


def phi_of(module: DrinfeldModule, P: TPoly | Sequence[int | Felt]) -> OrePoly:
    """Image of P(T) under T -> phi_T (Horner)."""
    f, q = module.field, module.q
    P = tpoly(f, P)
    out = OrePoly(f, q)
    for c in reversed(P):
        out = out * module.phi_T + c
    return out


def working_field(spec: TowerSpec) -> FieldSpec:
    """GF(q^(nk)), which contains GF(q^n) and GF(q^k)."""
    return spec.extension_field(spec.k)


def isogeny_defect(spec: TowerSpec, g: Felt, a: Felt) -> Felt:
    """g^(q^k)/a - g/a^(q^j) - a^(q^n-1) + 1; zero iff tau^k - a is an isogeny out of phi_g."""
    if not a:
        raise ZeroArgument("a = 0")
    q = spec.q
    return g ** (q**spec.k) / a - g / a ** (q**spec.j) - a ** (q**spec.n - 1) + 1


def isogenous_h(spec: TowerSpec, g: Felt, a: Felt) -> Felt:
    """h = -a^(q^n) + a + g^(q^k) for the target module of tau^k - a."""
    if isogeny_defect(spec, g, a):
        raise DefectNonzero("tau^k - a is not an isogeny for this g")
    q = spec.q
    return -(a ** (q**spec.n)) + a + g ** (q**spec.k)


def isogeny(spec: TowerSpec, a: Felt) -> OrePoly:
    """lambda = tau^k - a."""
    return OrePoly.tau(a.field, spec.q, spec.k) - a


def verify_intertwine(phi: DrinfeldModule, psi: DrinfeldModule, lam: OrePoly) -> bool:
    """lambda * phi_T == psi_T * lambda."""
    if phi.field != psi.field or phi.q != psi.q:
        raise SpecMismatch("modules over different rings")
    return lam * phi.phi_T == psi.phi_T * lam


def module_for(spec: TowerSpec, g: Felt) -> DrinfeldModule:
    return DrinfeldModule(spec.q, spec.n, spec.j, g)


@dataclass(frozen=True)
class Parametrized:
    """One (X, c) instance: a, g, h, and the two modules."""

    X: Felt
    c: Felt
    a: Felt
    g: Felt
    h: Felt


def parametrize(spec: TowerSpec, X: Felt, c: Felt | int = -1) -> Parametrized:
    """a = X^(q^k-1), g and h from the closed forms with constant c."""
    if not X:
        raise ZeroArgument("X = 0")
    q = spec.q
    c = X.field(c) if isinstance(c, int) else c
    top = X ** (q**spec.n - 1) + c
    g = top / X ** (q**spec.j - 1)
    h = top / X ** (q**spec.n - q**spec.k)
    return Parametrized(X, c, X ** (q**spec.k - 1), g, h)


def torsion_g(spec: TowerSpec, X: Felt) -> Felt:
    """(X^(q^n) - X) / X^(q^j): the c = -1 coefficient, making X a T-torsion point."""
    return parametrize(spec, X, -1).g


def torsion_h(spec: TowerSpec, X: Felt) -> Felt:
    """(X^(q^n) - X) / X^(q^n - q^k + 1)."""
    return parametrize(spec, X, -1).h


def kernel(lam: OrePoly) -> list[Felt]:
    """All roots of the additive map in the working field, canonical order."""
    return [v for v in lam.field.elements() if not lam.apply(v)]


def kernel_tau_k(spec: TowerSpec, a: Felt) -> list[Felt]:
    """Roots of v^(q^k) = a v, evaluated on packed integers."""
    f = a.field
    frob = f.frobenius_table(spec.q)
    out = []
    for v in range(f.size):
        w = v
        for _ in range(spec.k):
            w = frob[w]
        if w == f._mul(a.value, v):
            out.append(Felt(f, v))
    return out


@dataclass(frozen=True)
class TorsionReport:
    torsion: bool
    kernel_size: int
    kernel_is_line: bool

    @property
    def ok(self) -> bool:
        return self.torsion and self.kernel_is_line


def torsion_check(spec: TowerSpec, X: Felt, c: Felt | int = -1) -> TorsionReport:
    """phi_T(X) = 0, and ker(tau^k - X^(q^k-1)) = GF(q^k) X as sets."""
    par = parametrize(spec, X, c)
    phi = module_for(spec, par.g)
    ker = kernel_tau_k(spec, par.a)
    line = {b * X for b in subfield_elements(X.field, spec.q, spec.k)}
    return TorsionReport(
        torsion=not phi.phi_T.apply(X),
        kernel_size=len(ker),
        kernel_is_line=set(ker) == line,
    )


def semilinear_annihilator(q: int, k: int, field: FieldSpec | None = None) -> TPoly:
    """(T - 1)^k - (-1)^k.

    On GF(q^k) X the torsion module acts by T - 1 : beta X -> -beta^(q^j) X,
    whose minimal polynomial over GF(q) is this one (degree k).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    field = field or make_field(prime_factors(q)[0], 1)
    c = [comb(k, i) * (-1) ** (k - i) for i in range(k + 1)]
    c[0] -= (-1) ** k
    return tpoly(field, [v % field.p for v in c])


def annihilates(phi: DrinfeldModule, P: TPoly, points: Iterable[Felt]) -> bool:
    image = phi_of(phi, P)
    return all(not image.apply(v) for v in points)


def minimal_annihilator(spec: TowerSpec, X: Felt) -> TPoly:
    """Lowest-degree monic P over GF(q) with phi_P vanishing on ker(tau^k - X^(q^k-1)).

    The kernel has GF(q)-dimension k, so the search stops at degree k.
    """
    par = parametrize(spec, X, -1)
    phi = module_for(spec, par.g)
    ker = kernel_tau_k(spec, par.a)
    for D in monic_polys(X.field, spec.q, spec.k):
        if annihilates(phi, D, ker):
            return D
    raise IdentityViolation("no annihilator of degree <= k")  # pragma: no cover


@dataclass(frozen=True)
class AnnihilationReport:
    pk_divides: bool
    minimal: TPoly
    minimal_divides: bool
    pk_proper_divisors_annihilating: int

    @property
    def pk_minimal(self) -> bool:
        return self.pk_divides and self.pk_proper_divisors_annihilating == 0


def annihilation_check(spec: TowerSpec, X: Felt) -> AnnihilationReport:
    """Right-divisibility of phi_(P_k) by lambda, and the true minimal annihilator.

    phi_P is right-divisible by lambda exactly when phi_P kills ker(lambda)
    (lambda is separable), which is what the kernel search measures.
    """
    par = parametrize(spec, X, -1)
    phi = module_for(spec, par.g)
    lam = isogeny(spec, par.a)
    f = X.field
    P = pk_poly(spec.q, spec.k, f)
    pk_divides = not phi_of(phi, P).right_divmod(lam)[1]
    hits = 0
    if pk_divides:
        for D in monic_polys(f, spec.q, len(P) - 2):
            if not tpoly_divmod(P, D)[1] and not phi_of(phi, D).right_divmod(lam)[1]:
                hits += 1
    M = minimal_annihilator(spec, X)
    return AnnihilationReport(pk_divides, M, not phi_of(phi, M).right_divmod(lam)[1], hits)


# -- J-invariant -------------------------------------------------------------------------

def j_invariant(g: Felt, q: int, n: int) -> Felt:
    return g ** ((q**n - 1) // (q - 1))


def j_formulas(spec: TowerSpec, Z: Felt) -> tuple[Felt, Felt]:
    """((-1)^k (Z+1)^N_n / Z^N_j,  (-1)^k (Z+1)^N_n / Z^(q^k N_j))."""
    if not Z:
        raise ZeroArgument("Z = 0")
    Nn, Nj = spec.N(spec.n), spec.N(spec.j)
    sign = (-1) ** spec.k
    top = (Z + 1) ** Nn * sign
    return top / Z**Nj, top / Z ** (spec.q**spec.k * Nj)


def z_of(spec: TowerSpec, X: Felt) -> Felt:
    return -(X ** (spec.q**spec.n - 1))


def j_recursion_check(spec: TowerSpec, X: Felt, allow_degenerate: bool = True) -> bool:
    """J of phi_g and psi_h (torsion case) agree with the closed forms in Z = -X^(q^n-1).

    Z = -1 makes both invariants vanish; that is accepted unless
    ``allow_degenerate`` is false.
    """
    if not X:
        raise ZeroArgument("X = 0")
    Z = z_of(spec, X)
    if Z == -1 and not allow_degenerate:
        raise DegenerateZ("Z = -1: both J-invariants are 0")
    par = parametrize(spec, X, -1)
    jg, jh = j_formulas(spec, Z)
    return j_invariant(par.g, spec.q, spec.n) == jg and j_invariant(par.h, spec.q, spec.n) == jh


def scalar_isomorphic(module: DrinfeldModule, g2: Felt) -> bool:
    """Whether some lambda in GF(q^n)^x has g2 = g * lambda^(q^j - 1)."""
    q = module.q
    for lam in subfield_elements(module.field, q, module.n):
        if lam and module.g * lam ** (q**module.j - 1) == g2:
            return True
    return False
