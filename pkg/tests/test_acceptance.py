"""Acceptance grid: one test, and one PASS/FAIL line, per criterion.  All tolerances are zero."""

import pytest

from towerlab import suites
from towerlab.cli import main

PK_FAILURE = "pk-right-divisibility:q=2,n=3,j=1,k=2:GF(2^6)"


def _summary(res):
    bad = res.checks.failures
    n = sum(c.count for c in res.checks)
    if bad:
        return f"{len(bad)} failing: " + ", ".join(c.name for c in bad)
    return f"{len(res.checks)} checks over {n} cases, exact"


def test_criterion_1_splitting_counts(acceptance):
    res = suites.suite_split_counts()
    counts = {r["spec"]: r["counts"] for r in res.payload["rows"]}
    assert counts["q=2,n=3,j=1,k=2"] == [7, 28, 112]
    assert counts["q=2,n=2,j=1,k=1"] == [3, 6, 12]
    assert counts["q=3,n=2,j=1,k=1"] == [8, 24, 72]
    assert acceptance(1, "splitting counts (ell-1) q^((n-1)(i-1)), levels 1-3", res.ok, _summary(res))


def test_criterion_2_u_and_kummer(acceptance):
    res = suites.suite_kummer()
    assert acceptance(2, "unique u, Kummer relations, w/z from u", res.ok, _summary(res))


def test_criterion_3_separated_variables(acceptance):
    res = suites.suite_sepvar()
    live = sum(r["z_pairs_nonvacuous"] for r in res.payload["rows"])
    assert live > 0
    assert acceptance(3, "curve => x-form => z-form, converse witnesses", res.ok, _summary(res))


def test_criterion_4_ramification(acceptance):
    res = suites.suite_ramification()
    assert res.payload["genus_F2"]["q=2,n=3,j=1,k=2"] == 6
    assert acceptance(4, "figure squares, divisor degrees, Hurwitz genus", res.ok, _summary(res))


def test_criterion_5_different_over_zero(acceptance):
    res = suites.suite_main_claim()
    assert acceptance(5, "different over x=0: equality chains and b0 bound, p^t for t <= 6",
                      res.ok, _summary(res))


def test_criterion_6_bounds(acceptance):
    res = suites.suite_bounds()
    assert res.payload["ratio_limit_p2"] == "0.9428"
    assert acceptance(6, "odd-degree bound = harmonic bound, below DV, ratio 0.9428", res.ok, _summary(res))


def test_criterion_7_gv(acceptance):
    res = suites.suite_gv()
    assert res.payload["exceptions"] == [8, 27, 32, 125]
    assert acceptance(7, "GV exceptions {8,27,32,125}; 49 passes, 25 fails", res.ok, _summary(res))


def test_criterion_8_other_checks_pass():
    # Every Drinfeld check except P_k right-divisibility at q = 2, k = 2 holds.
    res = suites.suite_drinfeld()
    assert [c.name for c in res.checks.failures] == [PK_FAILURE]


@pytest.mark.xfail(
    strict=True,
    reason="(T-1)^N_k - (-1)^k does not annihilate ker(tau^2 - X^3) for q=2; "
    "the kernel's annihilator is (T-1)^k - (-1)^k, which does not divide it",
)
def test_criterion_8_drinfeld(acceptance):
    res = suites.suite_drinfeld()
    acceptance(8, "Drinfeld isogenies, kernels, P_k annihilation, J-recursion", res.ok, _summary(res))
    assert res.ok


def test_criterion_9_determinism(acceptance, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["report-all", "--output", str(a)])
    main(["report-all", "--output", str(b)])
    capsys.readouterr()
    same = a.read_bytes() == b.read_bytes()
    assert acceptance(9, "report-all twice gives byte-identical artifacts", same,
                      f"{len(a.read_bytes())} bytes")
