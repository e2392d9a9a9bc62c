"""Sweep reports and their CSV / JSON encodings.

Item fields are normalised to JSON scalars when an item is built:
integers stay integers, non-integral rationals become ``"a/b"`` strings
and reals become the shortest decimal string that round-trips through
float64 (values outside the float range keep 20 significant digits).  That
makes the JSON form round-trip exactly and keeps CSV output byte-stable.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

FLOAT_DIGITS = 20
PASS, FAIL = "pass", "fail"


def plain(v):
    """JSON scalar for an int, Fraction, float, mpf or string."""
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (float, mpmath.mpf)):
        f = float(v)
        if math.isfinite(f) and (f != 0 or v == 0):
            return repr(f)
        return mpmath.nstr(mpmath.mpf(v), FLOAT_DIGITS)
    raise TypeError(f"cannot serialise {type(v).__name__}")


def _plain_dict(d: dict) -> dict:
    return {str(k): plain(v) for k, v in d.items()}


@dataclass
class SweepItem:
    inputs: dict
    values: dict
    residual: object
    status: str

    def __post_init__(self):
        self.inputs = _plain_dict(self.inputs)
        self.values = _plain_dict(self.values)
        self.residual = plain(self.residual)
        if self.status not in (PASS, FAIL):
            raise ValueError(f"status must be pass or fail, got {self.status!r}")

    def to_dict(self) -> dict:
        return {"inputs": self.inputs, "values": self.values, "residual": self.residual, "status": self.status}


@dataclass
class SweepReport:
    kind: str
    items: list[SweepItem] = field(default_factory=list)
    timing: list[float] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, item: SweepItem, seconds: float = 0.0) -> None:
        self.items.append(item)
        self.timing.append(float(seconds))

    @property
    def summary(self) -> dict:
        n_pass = sum(1 for it in self.items if it.status == PASS)
        return {"total": len(self.items), "pass": n_pass, "fail": len(self.items) - n_pass}

    @property
    def ok(self) -> bool:
        return all(it.status == PASS for it in self.items)

    def failures(self) -> list[SweepItem]:
        return [it for it in self.items if it.status == FAIL]

    # JSON -------------------------------------------------------------------

    def to_dict(self, timing: bool = True) -> dict:
        doc = {
            "kind": self.kind,
            "meta": _plain_dict(self.meta),
            "summary": self.summary,
            "items": [it.to_dict() for it in self.items],
        }
        if timing:
            doc["timing"] = self.timing
        return doc

    def to_json(self, timing: bool = True, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(timing), indent=indent, sort_keys=False)

    @classmethod
    def from_dict(cls, doc: dict) -> "SweepReport":
        items = [SweepItem(**it) for it in doc["items"]]
        timing = list(doc.get("timing") or [0.0] * len(items))
        rep = cls(doc["kind"], items, timing, dict(doc.get("meta", {})))
        if "summary" in doc and doc["summary"] != rep.summary:
            raise ValueError("summary does not match the items")
        return rep

    @classmethod
    def from_json(cls, text: str) -> "SweepReport":
        return cls.from_dict(json.loads(text))

    # CSV --------------------------------------------------------------------

    def columns(self) -> list[str]:
        ins, vals = [], []
        for it in self.items:
            ins += [k for k in it.inputs if k not in ins]
            vals += [k for k in it.values if k not in vals]
        return ins + vals + ["residual", "status"]

    def to_csv(self) -> str:
        """RFC-4180 style CSV, one row per item; timing is left out so that
        repeated runs give identical bytes."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        cols = self.columns()
        w.writerow(cols)
        for it in self.items:
            row = {**it.inputs, **it.values, "residual": it.residual, "status": it.status}
            w.writerow(["" if row.get(c) is None else row.get(c) for c in cols])
        return buf.getvalue()


def rows_to_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    """CSV for a list of flat dicts (figure data and asymptotics tables)."""
    buf = io.StringIO()
    cols = columns or (list(rows[0]) if rows else [])
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(cols)
    for r in rows:
        w.writerow(["" if r.get(c) is None else plain(r.get(c)) for c in cols])
    return buf.getvalue()
