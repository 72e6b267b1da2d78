"""
Verification suites.  Each suite returns a :class:`SuiteResult`: a list of
named checks plus a JSON-ready payload.  The CLI serializes these and the
acceptance tests assert on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Any, Callable

from towerlab import drinfeld as dr
from towerlab.basic_field import PointPair, TowerSpec, fiber, kummer_check, recover_u, wz_map
from towerlab.checks import CheckList
from towerlab.errors import TowerLabError
from towerlab.finite_field import FieldSpec, make_field, prime_factors, prime_power_exponent, subfield_elements
from towerlab.ramcalc import (
    decimal_str,
    dv_compare,
    dv_ratio_limit,
    figure_tables,
    genus_bound,
    genus_F2,
    gv_holds,
    gv_scan,
    harmonic_bound,
    infinity_chain,
    limit_bounds,
    main_claim_identities,
    odd_degree_bound,
)
from towerlab.tower_enum import (
    check_sepvar_x,
    check_sepvar_z,
    chains,
    count_chains,
    sepvar_x_fiber,
    sepvar_z_sides,
    subtower_values,
)

SPLIT_GRID = ((2, 2, 1, 1), (2, 3, 1, 2), (3, 2, 1, 1))
#: Fields where the z-side identities are non-vacuous (some z != -1).
WIDE_FIELDS = {(2, 2, 1, 1): 3, (2, 3, 1, 2): 2, (3, 2, 1, 1): 3}
DRINFELD_SPECS = ((2, 3, 1, 2), (3, 3, 1, 2))
PRODUCT_CASES = ((2, 2), (3, 2), (2, 3))
BOUND_PRIMES = (2, 3, 5)
GV_LIMIT = 10_000


@dataclass
class SuiteResult:
    name: str
    checks: CheckList = field(default_factory=CheckList)
    payload: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.checks.ok


def ram_grid() -> list[TowerSpec]:
    """q in {2,3,4,5}, coprime (j,k) with j + k <= 6, after normalization, no repeats."""
    seen: dict[tuple, TowerSpec] = {}
    for q in (2, 3, 4, 5):
        for j in range(1, 6):
            for k in range(1, 6):
                if j + k <= 6 and gcd(j, k) == 1 and j + k >= 2:
                    s = TowerSpec(q, j + k, j, k)
                    seen.setdefault((s.q, s.n, s.j, s.k), s)
    return list(seen.values())


# -- splitting counts ------------------------------------------------------------------

def split_counts(spec: TowerSpec, levels: int = 3, fld: FieldSpec | None = None) -> SuiteResult:
    res = SuiteResult("split-counts")
    fld = fld or spec.ell_field
    counts, expected = [], []
    for i in range(1, levels + 1):
        c = count_chains(spec, i, fld)
        e = (fld.size - 1) * spec.q ** ((spec.n - 1) * (i - 1))
        counts.append(c)
        expected.append(e)
        res.checks.add(f"split-count:{spec.label()}:level{i}", c == e, f"{c} vs {e}")
    res.payload = {"spec": spec.label(), "field": fld.tag, "counts": counts, "expected": expected}
    return res


def suite_split_counts() -> SuiteResult:
    res = SuiteResult("split-counts")
    rows = []
    for t in SPLIT_GRID:
        r = split_counts(TowerSpec(*t))
        res.checks.extend(r.checks)
        rows.append(r.payload)
    res.payload = {"rows": rows}
    return res


# -- u-uniqueness and Kummer relations ------------------------------------------------------

def pairs_over(spec: TowerSpec, fld: FieldSpec) -> list[PointPair]:
    return [PointPair(x, y) for x in fld.nonzero() for y in fiber(spec, x)]


def kummer_suite(spec: TowerSpec, fld: FieldSpec | None = None) -> SuiteResult:
    res = SuiteResult("u-kummer")
    fld = fld or spec.ell_field
    pts = pairs_over(spec, fld)
    bad_u = bad_k = bad_w = 0
    for pt in pts:
        try:
            u = recover_u(spec, pt)
        except TowerLabError:
            bad_u += 1
            continue
        if not kummer_check(spec, pt, u).ok:
            bad_k += 1
        try:
            wz_map(spec, pt, u)
        except TowerLabError:
            bad_w += 1
    tag = f"{spec.label()}:{fld.tag}"
    res.checks.add(f"u-unique:{tag}", bad_u == 0, f"{bad_u} bad of {len(pts)}", len(pts))
    res.checks.add(f"kummer-relations:{tag}", bad_k == 0, f"{bad_k} bad", len(pts))
    res.checks.add(f"w-z-from-u:{tag}", bad_w == 0, f"{bad_w} bad", len(pts))
    res.payload = {"spec": spec.label(), "field": fld.tag, "pairs": len(pts)}
    return res


def suite_kummer() -> SuiteResult:
    res = SuiteResult("u-kummer")
    rows = []
    for t in SPLIT_GRID:
        spec = TowerSpec(*t)
        for fld in (spec.ell_field, spec.extension_field(2)):
            r = kummer_suite(spec, fld)
            res.checks.extend(r.checks)
            rows.append(r.payload)
    res.payload = {"rows": rows}
    return res


# -- separated-variable forms ---------------------------------------------------------------

def sepvar_suite(spec: TowerSpec, fld: FieldSpec, levels: int = 3) -> SuiteResult:
    """Every chain: each pair satisfies the x-form, each z-pair the z-form."""
    res = SuiteResult("sepvar")
    n_chain = n_x = n_z = live_z = 0
    bad_x = bad_z = bad_sub = 0
    for ch in chains(spec, levels, fld):
        n_chain += 1
        for a, b in zip(ch, ch[1:]):
            n_x += 1
            bad_x += not check_sepvar_x(spec, PointPair(a, b))
        try:
            sub = subtower_values(spec, ch)
        except TowerLabError:
            bad_sub += 1
            continue
        for z0, z1 in zip(sub.z, sub.z[1:]):
            n_z += 1
            live_z += z0 != -1
            bad_z += not check_sepvar_z(spec, z0, z1)
    tag = f"{spec.label()}:{fld.tag}"
    res.checks.add(f"curve-implies-sepvar-x:{tag}", bad_x == 0, f"{bad_x} of {n_x}", n_x)
    res.checks.add(f"u-subtower-recursion:{tag}", bad_sub == 0, f"{bad_sub} of {n_chain}", n_chain)
    res.checks.add(f"sepvar-x-implies-sepvar-z:{tag}", bad_z == 0, f"{bad_z} of {n_z}", n_z)
    res.payload = {"spec": spec.label(), "field": fld.tag, "chains": n_chain,
                   "x_pairs": n_x, "z_pairs": n_z, "z_pairs_nonvacuous": live_z}
    return res


def converse_witnesses(spec: TowerSpec, fld: FieldSpec) -> dict[str, Any]:
    """A pair satisfying the x-form but not the curve, and a z-pair whose x-lift fails.

    Returns encodings (or None when no witness exists in ``fld``).
    """
    out: dict[str, Any] = {"sepvar_x_not_curve": None, "sepvar_z_not_sepvar_x": None}
    for x in fld.nonzero():
        curve = set(fiber(spec, x))
        extra = [y for y in sepvar_x_fiber(spec, x) if y not in curve]
        if extra:
            out["sepvar_x_not_curve"] = [x.encode(), extra[0].encode()]
            break
    qn = spec.q**spec.n
    nz = list(fld.nonzero())
    for x in nz:
        zx = -(x ** (qn - 1))
        if zx == -1:
            continue
        for y in nz:
            zy = -(y ** (qn - 1))
            left, right = sepvar_z_sides(spec, zx, zy)
            if left == right and not check_sepvar_x(spec, PointPair(x, y)):
                out["sepvar_z_not_sepvar_x"] = [x.encode(), y.encode()]
                return out
    return out


def suite_sepvar() -> SuiteResult:
    res = SuiteResult("sepvar")
    rows, witnesses = [], []
    for t in SPLIT_GRID:
        spec = TowerSpec(*t)
        wide = spec.extension_field(WIDE_FIELDS[t])
        fields = [spec.ell_field, spec.extension_field(2)]
        if wide not in fields:
            fields.append(wide)
        for fld in fields:
            levels = 3 if fld.size <= 100 else 2
            r = sepvar_suite(spec, fld, levels)
            res.checks.extend(r.checks)
            rows.append(r.payload)
        live = sum(r["z_pairs_nonvacuous"] for r in rows if r["spec"] == spec.label())
        res.checks.add(f"z-form-nonvacuous:{spec.label()}", live > 0, f"{live} pairs with z != -1")
        w = converse_witnesses(spec, spec.extension_field(2))
        res.checks.add(f"converse-witness-x:{spec.label()}", w["sepvar_x_not_curve"] is not None)
        res.checks.add(f"converse-witness-z:{spec.label()}", w["sepvar_z_not_sepvar_x"] is not None)
        witnesses.append({"spec": spec.label(), **w})
    res.payload = {"rows": rows, "converse_witnesses": witnesses}
    return res


# -- ramification calculus ------------------------------------------------------------------

def ramcheck(spec: TowerSpec, max_wild_power: int = 6, levels: int = 3) -> SuiteResult:
    res = SuiteResult("ramification")
    fig = figure_tables(spec, strict=False)
    res.checks.extend(fig.checks)
    try:
        g = genus_F2(spec)
        res.checks.add(f"hurwitz-genus:{spec.label()}", True, str(g))
    except TowerLabError as exc:
        g = None
        res.checks.add(f"hurwitz-genus:{spec.label()}", False, str(exc))
    if g is not None:
        deg = spec.q ** (spec.n - 1)
        res.checks.add(f"genus-bound:{spec.label()}", g - 1 <= genus_bound(spec, deg))
    chain = infinity_chain(spec, levels)
    res.checks.add(f"b-inf-chain:{spec.label()}", all(ok for _, _, ok in chain))
    rows = main_claim_identities(spec, [spec.p**t for t in range(max_wild_power + 1)])
    for r in rows:
        res.checks.add(f"different-over-zero:{r.case}:e={r.wild}:{spec.label()}",
                       r.equalities_hold and r.inequality_holds, f"d={r.step.d} bound={r.bound}")
    res.payload = {
        "spec": spec.label(),
        "genus_F2": g,
        "figures": {
            name: {
                "places": d.places,
                "multiplicity": d.multiplicity,
                "edges": {e: {"e": s.e, "d": s.d} for e, s in d.edges.items()},
            }
            for name, d in fig.diagrams.items()
        },
        "infinity_chain": [{"level": lv, "e": s.e, "d": s.d, "equality": ok} for lv, s, ok in chain],
        "different_over_zero": [
            {"case": r.case, "wild": r.wild, "e": r.step.e, "d": r.step.d, "bound": r.bound}
            for r in rows
        ],
    }
    return res


def suite_ramification() -> SuiteResult:
    res = SuiteResult("ramification")
    genera = {}
    for spec in ram_grid():
        fig = figure_tables(spec, strict=False)
        res.checks.extend(fig.checks)
        try:
            genera[spec.label()] = genus_F2(spec)
            res.checks.add(f"hurwitz-genus:{spec.label()}", True)
        except TowerLabError as exc:
            res.checks.add(f"hurwitz-genus:{spec.label()}", False, str(exc))
    res.checks.add("genus-example:q=2,n=3,j=1,k=2", genera.get("q=2,n=3,j=1,k=2") == 6)
    res.payload = {"grid_size": len(ram_grid()), "genus_F2": genera}
    return res


def suite_main_claim() -> SuiteResult:
    res = SuiteResult("main-claim")
    n_rows = 0
    for spec in ram_grid():
        rows = main_claim_identities(spec, [spec.p**t for t in range(7)])
        n_rows += len(rows)
        bad = [r for r in rows if not (r.equalities_hold and r.inequality_holds)]
        res.checks.add(f"different-over-zero:{spec.label()}", not bad,
                       ", ".join(f"{r.case}:{r.wild}" for r in bad), len(rows))
    res.payload = {"rows_checked": n_rows}
    return res


# -- bounds ---------------------------------------------------------------------------------------

def bounds_rows(p: int, n: int, q_exponent: int = 1) -> SuiteResult:
    """One row per coprime partition n = j + k."""
    res = SuiteResult("bounds")
    q = p**q_exponent
    rows, seen = [], set()
    for j in range(1, n):
        k = n - j
        if gcd(j, k) != 1:
            continue
        spec = TowerSpec(q, n, j, k)
        if (spec.j, spec.k) in seen:
            continue
        seen.add((spec.j, spec.k))
        b = limit_bounds(spec, strict=False)
        res.checks.extend(b.checks)
        rows.append({
            "q": spec.q, "n": spec.n, "j": spec.j, "k": spec.k,
            "N_j": b.N_r[spec.j], "N_k": b.N_r[spec.k], "N_n": b.N_r[spec.n],
            "b0": b.b0, "b_inf": b.b_inf, "genus_coefficient": b.genus_coefficient,
            "lambda": b.lam, "odd_degree_bound": b.odd_degree,
            "DV": b.dv_display, "verdict": b.dv_verdict,
            "ratio_limit": None if b.ratio_limit is None else decimal_str(b.ratio_limit, 4),
        })
    res.payload = {"rows": rows}
    return res


def suite_bounds() -> SuiteResult:
    res = SuiteResult("bounds")
    rows = []
    for p in BOUND_PRIMES:
        for m in range(1, 5):
            A, lam = odd_degree_bound(p, m), harmonic_bound(p, m, m + 1)
            ell = p ** (2 * m + 1)
            cmp = dv_compare(lam, ell)
            res.checks.add(f"odd-degree-equals-harmonic:p={p},m={m}", A == lam, f"{A} vs {lam}")
            res.checks.add(f"below-DV:p={p},m={m}", cmp < 0)
            rows.append({"p": p, "m": m, "ell": ell, "bound": A, "verdict": cmp})
    ratio = decimal_str(dv_ratio_limit(2), 4)
    res.checks.add("ratio-limit-p2", ratio == "0.9428", ratio)
    res.payload = {"rows": rows, "ratio_limit_p2": ratio}
    return res


def suite_gv(max_ell: int = GV_LIMIT) -> SuiteResult:
    res = SuiteResult("gv")
    scan = gv_scan(max_ell)
    res.checks.add("gv-exceptions", scan.exceptions == [8, 27, 32, 125], str(scan.exceptions))
    res.checks.add("gv-square-49-passes", gv_holds(6, 49))
    res.checks.add("gv-square-25-fails", not gv_holds(4, 25))
    res.payload = {
        "max_ell": max_ell,
        "exceptions": scan.exceptions,
        "failing_squares": scan.failing_squares,
        "original_form_exceptions": scan.original_form_exceptions,
    }
    return res


# -- Drinfeld modules -----------------------------------------------------------------------

def drinfeld_stride(L: FieldSpec) -> int:
    """Every X for small working fields, roughly a hundred spot checks otherwise."""
    return 1 if L.size <= 128 else max(1, L.size // 100)


def drinfeld_suite(spec: TowerSpec, stride: int = 1) -> SuiteResult:
    """Isogeny, kernel, annihilation and J-invariant checks in GF(q^(nk)).

    ``stride`` thins the X range for large working fields (every stride-th X).
    """
    res = SuiteResult("drinfeld")
    L = dr.working_field(spec)
    q = spec.q
    tag = f"{spec.label()}:{L.tag}"
    xs = list(L.nonzero())[::stride]
    cs = sorted(subfield_elements(L, q, spec.k), key=lambda v: v.value)
    bad_iso = n_iso = 0
    for X in xs:
        for c in cs:
            par = dr.parametrize(spec, X, c)
            n_iso += 1
            lam = dr.isogeny(spec, par.a)
            ok = (not dr.isogeny_defect(spec, par.g, par.a)
                  and dr.isogenous_h(spec, par.g, par.a) == par.h
                  and dr.verify_intertwine(dr.module_for(spec, par.g), dr.module_for(spec, par.h), lam))
            bad_iso += not ok
    res.checks.add(f"isogeny-parametrization:{tag}", bad_iso == 0, f"{bad_iso} of {n_iso}", n_iso)

    bad_t = bad_ker = 0
    for X in xs:
        t = dr.torsion_check(spec, X)
        bad_t += not t.torsion
        bad_ker += not (t.kernel_is_line and t.kernel_size == q**spec.k)
    res.checks.add(f"torsion-point:{tag}", bad_t == 0, f"{bad_t} of {len(xs)}", len(xs))
    res.checks.add(f"kernel-is-GF(q^k)X:{tag}", bad_ker == 0, f"{bad_ker} of {len(xs)}", len(xs))
    # c != -1: phi_T(X) = (c + 1) X, never zero.
    neg = [c for c in cs if c != -1]
    leaks = sum(dr.torsion_check(spec, X, c).torsion for X in xs[:8] for c in neg)
    res.checks.add(f"non-torsion-control:{tag}", leaks == 0, f"{leaks} unexpected torsion")

    # Right factors tau - (alpha X)^(q-1) of tau^k - X^(q^k-1).
    X = L.gen
    lam = dr.isogeny(spec, X ** (q**spec.k - 1))
    nf = 0
    for alpha in cs:
        if alpha:
            f = dr.OrePoly.tau(L, q) - (alpha * X) ** (q - 1)
            nf += not lam.right_divmod(f)[1]
    res.checks.add(f"linear-right-factors:{tag}", nf == q**spec.k - 1, str(nf))

    ann = dr.annihilation_check(spec, X)
    res.checks.add(f"pk-right-divisibility:{tag}", ann.pk_divides,
                   "phi of (T-1)^N_k - (-1)^k is not right-divisible by lambda" if not ann.pk_divides else "")
    expected_min = dr.semilinear_annihilator(q, spec.k, L)
    res.checks.add(f"minimal-annihilator:{tag}", ann.minimal == expected_min and ann.minimal_divides,
                   str([c.value for c in ann.minimal]))

    bad_j = 0
    for Xv in xs:
        bad_j += not dr.j_recursion_check(spec, Xv)
    res.checks.add(f"j-recursion:{tag}", bad_j == 0, f"{bad_j} of {len(xs)}", len(xs))

    res.payload = {
        "spec": spec.label(),
        "field": L.tag,
        "X_tested": len(xs),
        "c_values": [c.encode() for c in cs],
        "pk": [c.value for c in dr.pk_poly(q, spec.k)],
        "pk_right_divisible": ann.pk_divides,
        "minimal_annihilator": [c.value for c in ann.minimal],
    }
    return res


def j_invariance(spec: TowerSpec) -> SuiteResult:
    """J(g) = J(g lambda^(q^j-1)) for lambda in GF(q^n)^x, and the converse, exhaustively."""
    res = SuiteResult("j-invariance")
    L = dr.working_field(spec)
    q, n, j = spec.q, spec.n, spec.j
    lams = [v for v in subfield_elements(L, q, n) if v]
    twists = {(v ** (q**j - 1)).value for v in lams}
    bad = bad_conv = 0
    by_j: dict[int, list] = {}
    for g in L.elements():
        J = dr.j_invariant(g, q, n)
        by_j.setdefault(J.value, []).append(g)
        for v in lams:
            bad += dr.j_invariant(g * v ** (q**j - 1), q, n) != J
    for group in by_j.values():
        g0 = group[0]
        for g in group:
            if g0:
                bad_conv += (g / g0).value not in twists
            else:
                bad_conv += bool(g)
    tag = f"{spec.label()}:{L.tag}"
    res.checks.add(f"j-invariance:{tag}", bad == 0, str(bad))
    res.checks.add(f"j-classifies:{tag}", bad_conv == 0, str(bad_conv))
    return res


def tower_link(spec: TowerSpec, fld: FieldSpec) -> SuiteResult:
    """Curve pairs (x, y) versus the Drinfeld correspondence: g(y) = h(x) and the J-map on z."""
    res = SuiteResult("tower-link")
    qn = spec.q**spec.n
    n_pairs = bad_gh = bad_j = bad_z = 0
    for x in fld.nonzero():
        for y in fiber(spec, x):
            n_pairs += 1
            g_y, h_x = dr.torsion_g(spec, y), dr.torsion_h(spec, x)
            bad_gh += g_y != h_x
            bad_j += dr.j_invariant(g_y, spec.q, spec.n) != dr.j_invariant(h_x, spec.q, spec.n)
            z, z_next = -(x ** (qn - 1)), -(y ** (qn - 1))
            jg, jh = dr.j_formulas(spec, z)[1], dr.j_formulas(spec, z_next)[0]
            bad_z += not (jg == jh and check_sepvar_z(spec, z, z_next))
    tag = f"{spec.label()}:{fld.tag}"
    res.checks.add(f"tower-pair-is-isogeny:{tag}", bad_gh == 0, f"{bad_gh} of {n_pairs}", n_pairs)
    res.checks.add(f"tower-pair-j-match:{tag}", bad_j == 0, f"{bad_j} of {n_pairs}", n_pairs)
    res.checks.add(f"j-map-is-z-tower-map:{tag}", bad_z == 0, f"{bad_z} of {n_pairs}", n_pairs)
    res.payload = {"spec": spec.label(), "field": fld.tag, "pairs": n_pairs}
    return res


def product_formula(q: int, k: int) -> bool:
    p = prime_factors(q)[0]
    L = make_field(p, prime_power_exponent(q, p) * k)
    return dr.pk_product(q, k, L) == dr.pk_poly(q, k, L)


def suite_drinfeld() -> SuiteResult:
    res = SuiteResult("drinfeld")
    rows = []
    for t in DRINFELD_SPECS:
        spec = TowerSpec(*t)
        r = drinfeld_suite(spec, drinfeld_stride(dr.working_field(spec)))
        res.checks.extend(r.checks)
        rows.append(r.payload)
    main = TowerSpec(*DRINFELD_SPECS[0])
    res.checks.extend(j_invariance(main).checks)
    res.checks.extend(tower_link(main, main.extension_field(2)).checks)
    for q, k in PRODUCT_CASES:
        res.checks.add(f"pk-product-formula:q={q},k={k}", product_formula(q, k))
    res.payload = {"rows": rows}
    return res


#: Acceptance grid in report order; criterion 9 (determinism) is checked on the artifact.
CRITERIA: list[tuple[int, str, Callable[[], SuiteResult]]] = [
    (1, "splitting counts", suite_split_counts),
    (2, "u-uniqueness and Kummer relations", suite_kummer),
    (3, "separated-variable forms", suite_sepvar),
    (4, "ramification calculus", suite_ramification),
    (5, "different over x=0 identities", suite_main_claim),
    (6, "asymptotic bounds", suite_bounds),
    (7, "GV exception set", suite_gv),
    (8, "Drinfeld correspondence", suite_drinfeld),
]


def verify(spec: TowerSpec, levels: int = 3) -> SuiteResult:
    """Pointwise suites (u, Kummer, separated variables) for one spec over GF(ell) and GF(ell^2)."""
    res = SuiteResult("verify")
    rows = []
    for fld in (spec.ell_field, spec.extension_field(2)):
        if fld.size > 1000:
            continue
        for r in (kummer_suite(spec, fld), sepvar_suite(spec, fld, levels if fld.size <= 100 else 2)):
            res.checks.extend(r.checks)
            rows.append(r.payload)
    res.payload = {"rows": rows}
    return res
