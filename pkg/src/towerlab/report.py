"""Deterministic rendering of reports as JSON, CSV or text."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, is_dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Any

from towerlab import __version__
from towerlab.checks import Check
from towerlab.finite_field import Felt
from towerlab.ramcalc import sig_digits

SCHEMA = "tower-lab/1"


def rational(x: Fraction) -> dict[str, Any]:
    return {"num": x.numerator, "den": x.denominator, "display": str(x)}


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, Felt):
        return obj.encode()
    if isinstance(obj, Decimal):
        return str(obj)
    if isinstance(obj, Check):
        return {"name": obj.name, "ok": obj.ok, "detail": obj.detail, "count": obj.count}
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(v) for v in obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def document(report: dict[str, Any]) -> dict[str, Any]:
    return {"meta": {"schema": SCHEMA, "version": __version__}, "report": to_jsonable(report)}


def render_json(report: dict[str, Any]) -> str:
    return json.dumps(document(report), indent=2) + "\n"


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(to_jsonable(v), separators=(",", ":"))
    if isinstance(v, Felt):
        return v.encode()
    return str(v)


def table_rows(report: dict[str, Any]) -> list[dict[str, Any]]:
    """The tabular part of a report: its ``rows``, else its checks."""
    if report.get("rows"):
        return list(report["rows"])
    return [
        {"name": c.name, "ok": c.ok, "detail": c.detail, "count": c.count}
        if isinstance(c, Check) else c
        for c in report.get("checks", [])
    ]


def render_csv(report: dict[str, Any]) -> str:
    rows = table_rows(report)
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def _text_value(v: Any) -> str:
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v)
        return f"{v} (approx {sig_digits(v, 6)})"
    if isinstance(v, Check):
        mark = "ok" if v.ok else "FAILED"
        return f"{mark}  {v.name}" + (f"  [{v.detail}]" if v.detail else "")
    return _cell(v)


def _text_lines(obj: Any, indent: int) -> list[str]:
    pad = "  " * indent
    out = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list, tuple)) and v:
                out.append(f"{pad}{k}:")
                out.extend(_text_lines(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {_text_value(v)}")
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            if isinstance(v, (dict, list, tuple)):
                out.append(f"{pad}-")
                out.extend(_text_lines(v, indent + 1))
            else:
                out.append(f"{pad}- {_text_value(v)}")
    else:
        out.append(f"{pad}{_text_value(obj)}")
    return out


def render_text(report: dict[str, Any]) -> str:
    head = f"# {SCHEMA} version {__version__}"
    return "\n".join([head] + _text_lines(report, 0)) + "\n"


RENDERERS = {"json": render_json, "csv": render_csv, "text": render_text}


def render(report: dict[str, Any], fmt: str = "json") -> str:
    return RENDERERS[fmt](report)
