"""
Exact ramification calculus and the bound engine.

A :class:`RamStep` is a (ramification index, different exponent) pair for one
place extension.  Steps compose by transitivity of the different,

    d(P''|P) = e(P''|P') * d(P'|P) + d(P''|P'),

and everything else in this module (the three ramification diagrams of the
basic function field, the genus, the b-bounds, the identity chains bounding
the different over x_1 = 0, and the asymptotic bounds) is integer or
``Fraction`` arithmetic.  No floating point enters any comparison; decimals
only appear in display strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import isqrt, lcm
from typing import Iterable, Sequence

from towerlab.basic_field import TowerSpec
from towerlab.checks import CheckList
from towerlab.errors import BothWild, IdentityViolation, NotApplicable, NotPPower, WildIndex
from towerlab.finite_field import is_prime


@dataclass(frozen=True)
class RamStep:
    e: int
    d: int

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("ramification index must be positive")
        if self.d < self.e - 1:
            raise ValueError(f"different exponent {self.d} < e - 1 = {self.e - 1}")

    def is_tame(self, p: int) -> bool:
        return self.e % p != 0

    def __str__(self) -> str:
        return f"(e={self.e}, d={self.d})"


IDENTITY = RamStep(1, 0)


def tame(e: int, p: int) -> RamStep:
    if e % p == 0:
        raise WildIndex(f"e={e} is divisible by p={p}")
    return RamStep(e, e - 1)


def compose(upper: RamStep, lower: RamStep) -> RamStep:
    """Step P''|P from P''|P' (upper) and P'|P (lower)."""
    return RamStep(upper.e * lower.e, upper.e * lower.d + upper.d)


def compose_all(steps: Sequence[RamStep]) -> RamStep:
    """Compose a path listed from the top place down."""
    out = IDENTITY
    for s in reversed(steps):
        out = compose(s, out) if out is not IDENTITY else s
    return out


def abhyankar(e1: int, e2: int, p: int) -> int:
    if e1 % p == 0 and e2 % p == 0:
        raise BothWild(f"both {e1} and {e2} are divisible by p={p}")
    return lcm(e1, e2)


def solve_upper_d(total: RamStep, upper_e: int, lower: RamStep) -> int:
    """The d of an upper step with index ``upper_e`` such that upper o lower == total."""
    if upper_e * lower.e != total.e:
        raise IdentityViolation("ramification indices do not multiply")
    return total.d - upper_e * lower.d


def N(q: int, r: int) -> int:
    return (q**r - 1) // (q - 1)


# -- the three ramification diagrams -----------------------------------------

#: Edges of each diagram: top place over x-, y- and u-places, and those over w and z.
EDGES = ("top|x", "top|y", "top|u", "x|w", "y|z", "u|w", "u|z")
#: The two commuting squares of each diagram: (side, path through x or y, path through u).
SQUARES = (
    ("w", ("top|x", "x|w"), ("top|u", "u|w")),
    ("z", ("top|y", "y|z"), ("top|u", "u|z")),
)


@dataclass(frozen=True)
class Diagram:
    name: str
    places: dict[str, str]
    edges: dict[str, RamStep]
    multiplicity: int  # how many such top places there are

    def path(self, names: Iterable[str]) -> RamStep:
        return compose_all([self.edges[n] for n in names])


def diagrams(spec: TowerSpec) -> dict[str, Diagram]:
    """Ramification data at P_gamma, Q_delta and V for the basic field."""
    q, n, j, k, p = spec.q, spec.n, spec.j, spec.k, spec.p
    Nn, Nj, Nk = N(q, n), N(q, j), N(q, k)
    big = tame(q**n - 1, p)
    pg = Diagram(
        "P_gamma",
        {"top": "P_gamma", "x": "[x=0]", "y": "[y=0]", "u": "[u=gamma]", "w": "[w=0]", "z": "[z=0]"},
        {
            "top|x": IDENTITY,
            "top|y": RamStep(q**k, q**n + q**k - 2),
            "top|u": big,
            "x|w": big,
            "y|z": big,
            "u|w": IDENTITY,
            "u|z": RamStep(q**k, q**k),
        },
        q ** (j - 1),
    )
    qd = Diagram(
        "Q_delta",
        {"top": "Q_delta", "x": "[x=inf]", "y": "[y=inf]", "u": "[u=delta]", "w": "[w=inf]", "z": "[z=inf]"},
        {
            "top|x": RamStep(q**j, q**n + q**j - 2),
            "top|y": IDENTITY,
            "top|u": big,
            "x|w": big,
            "y|z": big,
            "u|w": RamStep(q**j, q**j),
            "u|z": IDENTITY,
        },
        q ** (k - 1),
    )
    ex = q ** (j - 1) * Nk
    ey = q ** (k - 1) * Nj
    v = Diagram(
        "V",
        {"top": "V", "x": "[x=0]", "y": "[y=inf]", "u": "[u=inf]", "w": "[w=0]", "z": "[z=inf]"},
        {
            "top|x": RamStep(ex, (q ** (j - 1) - 1) * Nn + (ex - 1)),
            "top|y": RamStep(ey, (q ** (k - 1) - 1) * Nn + (ey - 1)),
            "top|u": tame(Nn, p),
            "x|w": big,
            "y|z": big,
            "u|w": RamStep(q ** (n - 1) - q ** (j - 1), q ** (n - 1) - 2),
            "u|z": RamStep(q ** (n - 1) - q ** (k - 1), q ** (n - 1) - 2),
        },
        q - 1,
    )
    return {"P_gamma": pg, "Q_delta": qd, "V": v}


@dataclass
class FigureReport:
    spec: TowerSpec
    diagrams: dict[str, Diagram]
    squares: list[tuple[str, str, RamStep, RamStep]]
    checks: CheckList


def figure_tables(spec: TowerSpec, strict: bool = True) -> FigureReport:
    """All diagram edges plus every consistency identity they must satisfy."""
    q, n, j, k = spec.q, spec.n, spec.j, spec.k
    dg = diagrams(spec)
    pg, qd, v = dg["P_gamma"], dg["Q_delta"], dg["V"]
    checks = CheckList()
    squares = []
    for d in dg.values():
        for side, a, b in SQUARES:
            via_a, via_u = d.path(a), d.path(b)
            squares.append((d.name, side, via_a, via_u))
            checks.add(f"transitivity:{d.name}:{side}", via_a == via_u, f"{via_a} vs {via_u}")
    deg = q ** (n - 1)
    ngam, ndel, nv = pg.multiplicity, qd.multiplicity, v.multiplicity
    # K(u) over K(w) and K(z): both rational, degree q^(n-1).
    checks.add("divisor:deg div0(w)", ngam * pg.edges["u|w"].e + v.edges["u|w"].e == deg)
    checks.add("divisor:deg divinf(w)", ndel * qd.edges["u|w"].e == deg)
    checks.add("divisor:deg div0(z)", ngam * pg.edges["u|z"].e == deg)
    checks.add("divisor:deg divinf(z)", ndel * qd.edges["u|z"].e + v.edges["u|z"].e == deg)
    diff_w = ngam * pg.edges["u|w"].d + ndel * qd.edges["u|w"].d + v.edges["u|w"].d
    diff_z = ngam * pg.edges["u|z"].d + ndel * qd.edges["u|z"].d + v.edges["u|z"].d
    checks.add("different:K(u)/K(w)", diff_w == 2 * deg - 2, f"{diff_w}")
    checks.add("different:K(u)/K(z)", diff_z == 2 * deg - 2, f"{diff_z}")
    # Fundamental identity sum(e) = degree in F/K(u), F/K(x), F/K(y).
    checks.add("count:V places", nv * v.edges["top|u"].e == q**n - 1)
    checks.add("fundamental:F/K(x) over 0", ngam * pg.edges["top|x"].e + nv * v.edges["top|x"].e == deg)
    checks.add("fundamental:F/K(x) over inf", ndel * qd.edges["top|x"].e == deg)
    checks.add("fundamental:F/K(y) over 0", ngam * pg.edges["top|y"].e == deg)
    checks.add("fundamental:F/K(y) over inf", ndel * qd.edges["top|y"].e + nv * v.edges["top|y"].e == deg)
    if strict:
        checks.require()
    return FigureReport(spec, dg, squares, checks)


# -- genus ----------------------------------------------------------------------

def genus_formula(spec: TowerSpec) -> Fraction:
    q, n, j, k = spec.q, spec.n, spec.j, spec.k
    return Fraction((q**n - 2) * (q ** (j - 1) + q ** (k - 1) - 2) + (q**n - q), 2)


def hurwitz_genera(spec: TowerSpec) -> dict[str, Fraction]:
    """g(F) from Hurwitz over each of the rational subfields K(u), K(x), K(y)."""
    q, n = spec.q, spec.n
    dg = diagrams(spec)
    out = {}
    for base, degree in (("u", q**n - 1), ("x", q ** (n - 1)), ("y", q ** (n - 1))):
        diff = sum(d.multiplicity * d.edges[f"top|{base}"].d for d in dg.values())
        out[base] = Fraction(-2 * degree + diff + 2, 2)
    return out


def genus_F2(spec: TowerSpec) -> int:
    g = genus_formula(spec)
    others = hurwitz_genera(spec)
    if g.denominator != 1 or any(h != g for h in others.values()):
        raise IdentityViolation(f"genus mismatch: formula {g}, Hurwitz {others}")
    return int(g)


# -- b-bounds and the genus estimate -----------------------------------------

def b_bounds(spec: TowerSpec) -> tuple[Fraction, Fraction]:
    """(b_0, b_inf)."""
    q, n, j, k = spec.q, spec.n, spec.j, spec.k
    return Fraction(q**n - 1, q**k - 1) + 1, Fraction(q**n - 1, q**j - 1) + 1


def infinity_chain(spec: TowerSpec, levels: int) -> list[tuple[int, RamStep, bool]]:
    """Places over x_1 = inf: compose the per-level step and test d <= b_inf (e - 1).

    Each level contributes the step (q^j, q^n + q^j - 2); the bound is attained
    with equality, which is also recorded.
    """
    q, n, j = spec.q, spec.n, spec.j
    step = RamStep(q**j, q**n + q**j - 2)
    b_inf = b_bounds(spec)[1]
    out = []
    total = IDENTITY
    for i in range(1, levels + 1):
        total = compose(step, total)
        out.append((i + 1, total, total.d == b_inf * (total.e - 1)))
    return out


def genus_bound(spec: TowerSpec, degree: int) -> Fraction:
    """Upper bound for g(F_i) - 1 when [F_i : F_1] = degree."""
    q, n, j, k = spec.q, spec.n, spec.j, spec.k
    rhs = Fraction(degree, 2) * (Fraction(q**n - 1, q**k - 1) + Fraction(q**n - 1, q**j - 1))
    b0, binf = b_bounds(spec)
    via_b = (-1 + (b0 + binf) / 2) * degree
    if rhs != via_b:
        raise IdentityViolation(f"genus bound forms disagree: {rhs} vs {via_b}")
    return rhs


# -- the different over x_1 = 0 --------------------------------------------------

def _p_power(x: int, p: int) -> bool:
    if x < 1:
        return False
    while x % p == 0:
        x //= p
    return x == 1


@dataclass(frozen=True)
class ClaimRow:
    case: str
    wild: int
    step: RamStep
    closed_forms: tuple[Fraction, ...]
    bound: Fraction

    @property
    def equalities_hold(self) -> bool:
        return all(c == self.step.d for c in self.closed_forms)

    @property
    def inequality_holds(self) -> bool:
        return self.step.d <= self.bound


def weakly_ramified(e: int) -> RamStep:
    return RamStep(e, 2 * (e - 1))


def main_claim_identities(spec: TowerSpec, wild_exponents: Iterable[int]) -> list[ClaimRow]:
    """Rebuild d(P~|[x_1=0]) by transitivity for each wild exponent, both cases.

    Case "m=1": e_1 is the index over [u_1 = inf] of a weakly ramified step;
    case "m>=2": e~ is the wild index of the top step over the composite M.
    """
    p, q, n, j, k = spec.p, spec.q, spec.n, spec.j, spec.k
    Nn, Nk = N(q, n), N(q, k)
    ratio = Fraction(Nn, Nk)
    b0 = b_bounds(spec)[0]
    e0 = q ** (j - 1) * Nk
    p2_over_p1 = diagrams(spec)["V"].edges["top|x"]
    rows = []
    for w in wild_exponents:
        if not _p_power(w, p):
            raise NotPPower(f"{w} is not a power of p={p}")
        # m = 1: P~ -> P -> [u_1=inf] against P~ -> P_2 -> [u_1=inf].
        via_P = compose(tame(Nn, p), weakly_ramified(w))
        d_top = solve_upper_d(via_P, w, tame(Nn, p))
        if d_top != (Nn + 1) * (w - 1):
            raise IdentityViolation(f"different of P~|P_2 is {d_top}")
        total = compose(RamStep(w, d_top), p2_over_p1)
        E = e0 * w
        rows.append(ClaimRow(
            "m=1", w, total,
            (Fraction(Nn * (w * q ** (j - 1) - 1) + (E - 1)),
             (ratio + 1) * (E - 1) + ratio - Nn),
            b0 * (E - 1),
        ))
        # m >= 2: F_{i+1} -> E_i -> L against F_{i+1} -> M -> L.
        via_E = compose(tame(Nn, p), weakly_ramified(w))
        d_tilde = solve_upper_d(via_E, w, tame(Nn, p))
        if d_tilde != (Nn + 1) * (w - 1):
            raise IdentityViolation(f"different of F_(i+1)|M is {d_tilde}")
        m_over_f1 = compose(tame(Nk, p), IDENTITY)
        total = compose(RamStep(w, d_tilde), m_over_f1)
        E = Nk * w
        rows.append(ClaimRow(
            "m>=2", w, total,
            (Fraction(d_tilde + w * (Nk - 1)),
             (ratio + 1) * (E - 1) - (Nn - ratio)),
            b0 * (E - 1),
        ))
    return rows


# -- asymptotic bounds -------------------------------------------------------------

def harmonic_bound(q: int, j: int, k: int) -> Fraction:
    """2 / (1/(q^j - 1) + 1/(q^k - 1))."""
    return 2 / (Fraction(1, q**j - 1) + Fraction(1, q**k - 1))


def odd_degree_bound(p: int, m: int) -> Fraction:
    """2 (p^(m+1) - 1) / (p + 1 + eps) with eps = (p - 1)/(p^m - 1); lower bound for A(p^(2m+1))."""
    if m < 1:
        raise ValueError("m must be >= 1")
    eps = Fraction(p - 1, p**m - 1)
    return Fraction(2 * (p ** (m + 1) - 1)) / (p + 1 + eps)


def original_gv_form(p: int, m: int) -> Fraction:
    """2 (p^m - 1) / (p + 1 + eps): the coefficient as first displayed for the GV threshold."""
    eps = Fraction(p - 1, p**m - 1)
    return Fraction(2 * (p**m - 1)) / (p + 1 + eps)


def dv_compare(lam: Fraction, ell: int) -> int:
    """Sign of lam - (sqrt(ell) - 1), decided on integers: compare (lam + 1)^2 with ell."""
    lam = Fraction(lam)
    if lam + 1 <= 0:
        return -1
    r, s = lam.numerator, lam.denominator
    lhs, rhs = (r + s) ** 2, ell * s * s
    return (lhs > rhs) - (lhs < rhs)


DV_VERDICT = {-1: "below-DV", 0: "meets-DV", 1: "above-DV"}


def decimal_str(x: Fraction | Decimal, places: int = 6) -> str:
    """Approximate decimal rendering of an exact value (display only)."""
    with localcontext() as ctx:
        ctx.prec = 50
        if isinstance(x, Fraction):
            x = Decimal(x.numerator) / Decimal(x.denominator)
        return f"{x:.{places}f}"


def sig_digits(x: Fraction | Decimal, digits: int = 6) -> str:
    with localcontext() as ctx:
        ctx.prec = 50
        if isinstance(x, Fraction):
            x = Decimal(x.numerator) / Decimal(x.denominator)
        return f"{x:.{digits}g}"


def sqrt_decimal(x: int | Fraction, prec: int = 40) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = prec
        x = Fraction(x)
        return (Decimal(x.numerator) / Decimal(x.denominator)).sqrt()


def dv_ratio_limit(p: int) -> Decimal:
    """2 sqrt(p) / (p + 1): limit of (odd-degree bound) / (DV bound) as m grows."""
    with localcontext() as ctx:
        ctx.prec = 40
        return Decimal(4 * p).sqrt() / Decimal(p + 1)


@dataclass
class BoundReport:
    spec: TowerSpec
    N_r: dict[int, int]
    b0: Fraction
    b_inf: Fraction
    genus_coefficient: Fraction
    lam: Fraction
    odd_degree: Fraction | None
    dv_display: str
    dv_verdict: str
    ratio_limit: Decimal | None
    checks: CheckList = field(default_factory=CheckList)


def limit_bounds(spec: TowerSpec, strict: bool = True) -> BoundReport:
    q, n, j, k, p = spec.q, spec.n, spec.j, spec.k, spec.p
    b0, binf = b_bounds(spec)
    lam = harmonic_bound(q, j, k)
    checks = CheckList()
    ell = q**n
    # N(F_i) / (g(F_i) - 1) >= (ell - 1) [F_i:F_1] / bound, independent of the degree.
    checks.add("lambda:ratio-form", Fraction(ell - 1) / (-1 + (b0 + binf) / 2) == lam)
    odd = None
    if q == p and n % 2 == 1 and {j, k} == {(n - 1) // 2, (n + 1) // 2}:
        odd = odd_degree_bound(p, (n - 1) // 2)
        checks.add("lambda:odd-degree-form", odd == lam, f"{odd} vs {lam}")
    verdict = dv_compare(lam, ell)
    checks.add("lambda:not-above-DV", verdict <= 0, DV_VERDICT[verdict])
    root = isqrt(ell)
    dv_display = f"{root - 1}" if root * root == ell else f"sqrt({ell})-1"
    report = BoundReport(
        spec=spec,
        N_r={r: N(q, r) for r in (j, k, n)},
        b0=b0,
        b_inf=binf,
        genus_coefficient=-1 + (b0 + binf) / 2,
        lam=lam,
        odd_degree=odd,
        dv_display=dv_display,
        dv_verdict=DV_VERDICT[verdict],
        ratio_limit=dv_ratio_limit(p) if q == p else None,
        checks=checks,
    )
    if strict:
        checks.require()
    return report


# -- Gilbert-Varshamov threshold ---------------------------------------------------

def gv_holds(A: Fraction, ell: int) -> bool:
    """A * (log_ell(2 ell - 1) - 1) > 1, decided as (2 ell - 1)^r > ell^(r + s) for A = r/s."""
    A = Fraction(A)
    if A <= 0:
        return False
    r, s = A.numerator, A.denominator
    return (2 * ell - 1) ** r > ell ** (r + s)


def prime_powers(limit: int, min_exp: int = 2) -> list[tuple[int, int, int]]:
    """(ell, p, n) for every prime power ell = p^n <= limit with n >= min_exp, sorted by ell."""
    out = []
    for p in range(2, isqrt(limit) + 1):
        if not is_prime(p):
            continue
        n, v = min_exp, p**min_exp
        while v <= limit:
            out.append((v, p, n))
            n += 1
            v *= p
    return sorted(out)


@dataclass
class GVScan:
    max_ell: int
    rows: list[dict]
    exceptions: list[int]
    failing_squares: list[int]
    original_form_exceptions: list[int]


def gv_scan(max_ell: int) -> GVScan:
    """Decide the GV threshold for every non-prime ell <= max_ell with the best known bound.

    Squares use A = sqrt(ell) - 1; odd powers p^(2m+1) use the odd-degree bound.
    The exception set lists failing odd powers; the first-displayed coefficient
    2(p^m - 1)/(p + 1 + eps) is evaluated alongside for comparison.
    """
    if max_ell < 125:
        raise ValueError("max_ell must be at least 125")
    rows, exceptions, squares, original = [], [], [], []
    for ell, p, n in prime_powers(max_ell):
        if n % 2 == 0:
            A = Fraction(p ** (n // 2) - 1)
            ok = gv_holds(A, ell)
            rows.append({"ell": ell, "p": p, "n": n, "kind": "square", "A": A, "holds": ok})
            if not ok:
                squares.append(ell)
        else:
            m = (n - 1) // 2
            A = odd_degree_bound(p, m)
            A0 = original_gv_form(p, m)
            ok, ok0 = gv_holds(A, ell), gv_holds(A0, ell)
            rows.append({"ell": ell, "p": p, "n": n, "kind": "odd", "A": A, "holds": ok,
                         "original_A": A0, "original_holds": ok0})
            if not ok:
                exceptions.append(ell)
            if not ok0:
                original.append(ell)
    return GVScan(max_ell, rows, exceptions, squares, original)


# -- earlier lower bounds, for comparison ---------------------------------------------

@dataclass(frozen=True)
class PriorRow:
    name: str
    applicable: bool
    value: Fraction | None = None
    display: str = ""
    note: str = ""


def floor_two_sqrt(x: int) -> int:
    """floor(2 sqrt(x)) for x >= 0, exactly."""
    return isqrt(4 * x)


def lm_bound(q: int, n: int) -> Fraction:
    """(4q + 4) / (floor((3 + floor(2 sqrt(2q + 2))) / (n - 2)) + floor(2 sqrt(2q + 3)))."""
    if q % 2 == 0 or n < 3 or not is_prime(n):
        raise NotApplicable("needs odd q and prime n >= 3")
    den = (3 + floor_two_sqrt(2 * q + 2)) // (n - 2) + floor_two_sqrt(2 * q + 3)
    return Fraction(4 * q + 4, den)


def cubic_bound(q: int) -> Fraction:
    """2 (q^2 - 1) / (q + 2), lower bound for A(q^3)."""
    return Fraction(2 * (q * q - 1), q + 2)


SERRE_C = Fraction(1, 96)


def prior_bounds_table(p: int, n: int) -> list[PriorRow]:
    """Earlier lower bounds for A(p^n) next to the odd-degree and square-field values."""
    ell = p**n
    rows = []
    if n % 2 == 1 and n >= 3:
        v = odd_degree_bound(p, (n - 1) // 2)
        rows.append(PriorRow("odd-degree tower", True, v, str(v)))
    else:
        rows.append(PriorRow("odd-degree tower", False, note="needs odd n >= 3"))
    if n % 2 == 0:
        v = Fraction(p ** (n // 2) - 1)
        rows.append(PriorRow("square field (sqrt(ell)-1)", True, v, str(v)))
    else:
        rows.append(PriorRow("square field (sqrt(ell)-1)", False, note="ell is not a square"))
    try:
        v = lm_bound(p, n)
        rows.append(PriorRow("odd q, prime n", True, v, str(v)))
    except NotApplicable as exc:
        rows.append(PriorRow("odd q, prime n", False, note=str(exc)))
    if n == 3:
        v = cubic_bound(p)
        rows.append(PriorRow("cubic tower", True, v, str(v)))
    else:
        rows.append(PriorRow("cubic tower", False, note="needs n = 3"))
    if p == 2:
        v = SERRE_C * n
        rows.append(PriorRow("class field tower c*log2(ell)", True, v, str(v), "lower bound is strict"))
    else:
        rows.append(PriorRow("class field tower c*log2(ell)", True, None,
                             f"{n}*log2({p})/96",
                             "log2(p) irrational; coefficient n/96 stored exactly"))
    rows.append(PriorRow("DV upper bound", True, None, f"sqrt({ell})-1", "upper bound"))
    return rows
