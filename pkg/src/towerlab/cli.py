"""
towerlab command line.

    towerlab count --p 2 --n 3 --j 1 --k 2 --levels 3
    towerlab gv-scan --max-ell 10000
    towerlab report-all --output report.json

Exit status: 0 all checks passed, 1 invalid parameters, 2 a checked identity
failed (failures are listed in the report and on stderr), 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from towerlab import suites
from towerlab.basic_field import TowerSpec
from towerlab.checks import CheckList
from towerlab.errors import CapExceeded, TowerLabError, ValidationError
from towerlab.ramcalc import prior_bounds_table
from towerlab.report import render

EXIT_OK, EXIT_VALIDATION, EXIT_ASSERTION, EXIT_IO = 0, 1, 2, 3

COMMANDS = ("count", "verify", "bounds", "gv-scan", "ramcheck", "drinfeld-verify", "report-all")


@dataclass
class RunConfig:
    command: str
    p: int | None = None
    q_exponent: int = 1
    n: int | None = None
    j: int | None = None
    k: int | None = None
    levels: int = 3
    max_ell: int = suites.GV_LIMIT
    output: str | None = None
    format: str = "json"

    def spec(self) -> TowerSpec:
        for name in ("p", "n", "j", "k"):
            if getattr(self, name) is None:
                raise ValidationError(f"--{name} is required for {self.command}")
        return TowerSpec.from_prime(self.p, self.n, self.j, self.k, self.q_exponent)

    def validate(self) -> None:
        if self.levels < 1:
            raise ValidationError("levels must be at least 1")
        if self.command == "gv-scan" and self.max_ell < 125:
            raise ValidationError("max-ell must be at least 125")
        if self.command == "bounds":
            if self.p is None or self.n is None:
                raise ValidationError("--p and --n are required for bounds")
            if self.n < 2:
                raise ValidationError("n must be at least 2")
            TowerSpec.from_prime(self.p, self.n, 1, self.n - 1, self.q_exponent)
        elif self.command in ("count", "verify", "ramcheck", "drinfeld-verify"):
            self.spec()


def _params(cfg: RunConfig) -> dict[str, Any]:
    keys = {
        "count": ("p", "q_exponent", "n", "j", "k", "levels"),
        "verify": ("p", "q_exponent", "n", "j", "k", "levels"),
        "bounds": ("p", "q_exponent", "n"),
        "gv-scan": ("max_ell",),
        "ramcheck": ("p", "q_exponent", "n", "j", "k", "levels"),
        "drinfeld-verify": ("p", "q_exponent", "n", "j", "k"),
        "report-all": (),
    }[cfg.command]
    return {k.replace("_", "-"): getattr(cfg, k) for k in keys}


def _finish(cfg: RunConfig, checks: CheckList, result: dict[str, Any]) -> dict[str, Any]:
    return {
        "command": cfg.command,
        "params": _params(cfg),
        "ok": checks.ok,
        "failures": [c.name for c in checks.failures],
        **result,
        "checks": list(checks),
    }


def build_report(cfg: RunConfig) -> dict[str, Any]:
    """Run the requested suite and assemble the (unserialized) report."""
    cfg.validate()
    cmd = cfg.command
    if cmd == "count":
        r = suites.split_counts(cfg.spec(), cfg.levels)
        rows = [{"level": i + 1, "count": c, "expected": e}
                for i, (c, e) in enumerate(zip(r.payload["counts"], r.payload["expected"]))]
        return _finish(cfg, r.checks, {**r.payload, "rows": rows})
    if cmd == "verify":
        spec = cfg.spec()
        if spec.ell_field.size > 1000:
            raise CapExceeded("verify enumerates GF(ell); ell must be at most 1000")
        r = suites.verify(spec, cfg.levels)
        return _finish(cfg, r.checks, {"spec": spec.label(), "rows": r.payload["rows"]})
    if cmd == "bounds":
        r = suites.bounds_rows(cfg.p, cfg.n, cfg.q_exponent)
        prior = [] if cfg.q_exponent != 1 else prior_bounds_table(cfg.p, cfg.n)
        return _finish(cfg, r.checks, {"rows": r.payload["rows"], "prior_bounds": prior})
    if cmd == "gv-scan":
        r = suites.suite_gv(cfg.max_ell)
        checks = r.checks
        if cfg.max_ell != suites.GV_LIMIT:
            # The expected exception list only applies to the full scan range.
            checks = CheckList([c for c in r.checks if c.name != "gv-exceptions"])
        return _finish(cfg, checks, r.payload)
    if cmd == "ramcheck":
        r = suites.ramcheck(cfg.spec(), levels=cfg.levels)
        return _finish(cfg, r.checks, r.payload)
    if cmd == "drinfeld-verify":
        spec = cfg.spec()
        L = suites.dr.working_field(spec)
        if L.size > 5000:
            raise CapExceeded(f"working field {L.tag} is too large for exhaustive checks")
        r = suites.drinfeld_suite(spec, suites.drinfeld_stride(L))
        return _finish(cfg, r.checks, r.payload)
    if cmd == "report-all":
        checks = CheckList()
        criteria = []
        for num, title, fn in suites.CRITERIA:
            r = fn()
            checks.extend(r.checks)
            criteria.append({"criterion": num, "title": title, "ok": r.ok,
                             "failures": [c.name for c in r.checks.failures],
                             "payload": r.payload})
        return _finish(cfg, checks, {"criteria": criteria})
    raise ValidationError(f"unknown command {cmd}")  # pragma: no cover


def _add_spec_args(sp: argparse.ArgumentParser, needs_jk: bool = True) -> None:
    sp.add_argument("--p", type=int, required=True, help="characteristic")
    sp.add_argument("--q-exponent", type=int, default=1, help="q = p^e (default 1)")
    sp.add_argument("--n", type=int, required=True)
    if needs_jk:
        sp.add_argument("--j", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="towerlab", description="Exhaustive and exact checks for a recursive tower.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=None, help="write the report here (default stdout)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("count", parents=[common], help="count splitting chains over GF(ell)")
    _add_spec_args(sp)
    sp.add_argument("--levels", type=int, default=3)

    sp = sub.add_parser("verify", parents=[common], help="u, Kummer and separated-variable checks")
    _add_spec_args(sp)
    sp.add_argument("--levels", type=int, default=3)

    sp = sub.add_parser("bounds", parents=[common], help="exact tower limits vs the DV bound, per partition")
    _add_spec_args(sp, needs_jk=False)

    sp = sub.add_parser("gv-scan", parents=[common], help="GV threshold over non-prime ell")
    sp.add_argument("--max-ell", type=int, default=suites.GV_LIMIT)

    sp = sub.add_parser("ramcheck", parents=[common], help="ramification tables, genus and differents")
    _add_spec_args(sp)
    sp.add_argument("--levels", type=int, default=3)

    sp = sub.add_parser("drinfeld-verify", parents=[common], help="isogeny, kernel and J-invariant checks")
    _add_spec_args(sp)

    sub.add_parser("report-all", parents=[common], help="run the whole acceptance grid")
    return parser


def parse_config(argv: Sequence[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields)


def run(cfg: RunConfig) -> int:
    try:
        report = build_report(cfg)
    except (TowerLabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    text = render(report, cfg.format)
    try:
        if cfg.output and cfg.output != "-":
            Path(cfg.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    if not report["ok"]:
        print(json.dumps({"failures": report["failures"]}), file=sys.stderr)
        return EXIT_ASSERTION
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
