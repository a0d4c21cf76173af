"""Report assembly and serialization (JSON, CSV, markdown)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .constants import ConstantEstimate
from .lebesgue import BoundCertificate

CSV_COLUMNS = ("kind", "N", "lower", "upper", "exact", "citation")


@dataclass
class Check:
    """A computed value compared against a reference value or range."""

    name: str
    computed: float
    expected: float | None = None
    lo: float | None = None
    hi: float | None = None
    tol: float = 1e-9
    citation: str = ""
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        c = self.computed
        if not math.isfinite(c):
            return False
        if self.expected is not None and abs(c - self.expected) > self.tol * max(1.0, abs(self.expected)):
            return False
        if self.lo is not None and c < self.lo - self.tol * max(1.0, abs(self.lo)):
            return False
        if self.hi is not None and c > self.hi + self.tol * max(1.0, abs(self.hi)):
            return False
        return True

    def to_dict(self) -> dict:
        return {"name": self.name, "computed": self.computed, "expected": self.expected, "lo": self.lo,
                "hi": self.hi, "tol": self.tol, "ok": self.ok, "citation": self.citation, "info": self.info}


@dataclass
class Report:
    header: dict
    constants: list[ConstantEstimate] = field(default_factory=list)
    certificates: list[BoundCertificate] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    partial: bool = False

    def extend(self, other: "Report"):
        self.constants += other.constants
        self.certificates += other.certificates
        self.checks += other.checks
        self.notes += other.notes
        self.partial = self.partial or other.partial

    @property
    def summary(self) -> dict:
        return {
            "constants": len(self.constants),
            "exact": sum(e.exact for e in self.constants),
            "certificates": len(self.certificates),
            "holds": sum(c.holds for c in self.certificates),
            "violated": sum(not c.holds for c in self.certificates),
            "checks": len(self.checks),
            "checks_failed": sum(not c.ok for c in self.checks),
        }

    @property
    def failed(self) -> bool:
        s = self.summary
        return s["violated"] > 0 or s["checks_failed"] > 0

    def to_dict(self) -> dict:
        return {
            "header": self.header,
            "constants": [e.to_dict() for e in self.constants],
            "certificates": [c.to_dict() for c in self.certificates],
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
            "partial": self.partial,
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return json.dumps(_clean(self.to_dict()), sort_keys=True, indent=1) + "\n"

    def to_csv(self) -> str:
        """Constant rows first, then certificate and check rows in the same columns.

        For certificates ``lower``/``upper`` hold lhs/rhs and ``exact`` holds the
        status; for checks they hold computed/expected and ok/failed.
        """
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for e in self.constants:
            w.writerow([e.kind, e.N, _fmt(e.lower), _fmt(e.upper), str(e.exact).lower(), "; ".join(e.citations)])
        for c in self.certificates:
            w.writerow([f"certificate: {c.name}", self.header.get("N", ""), _fmt(c.lhs), _fmt(c.rhs),
                        c.status, c.citation])
        for c in self.checks:
            ref = c.expected if c.expected is not None else c.hi
            w.writerow([f"check: {c.name}", "", _fmt(c.computed), _fmt(ref),
                        "ok" if c.ok else "failed", c.citation])
        return buf.getvalue()

    def to_markdown(self) -> str:
        h = self.header
        lines = [f"# {h.get('title', 'greedylab report')}", ""]
        for k in sorted(h):
            if k != "title":
                lines.append(f"- {k}: {h[k]}")
        lines.append("")
        if self.constants:
            lines += ["## Constants", ""]
            for N in sorted({e.N for e in self.constants}):
                lines.append(f"N = {N}:")
                for e in (e for e in self.constants if e.N == N):
                    val = _fmt(e.lower) if e.exact else f"[{_fmt(e.lower)}, {_fmt(e.upper)}]"
                    lines.append(f"- {e.kind} = {val}")
                lines.append("")
        if self.certificates:
            lines += ["## Certificates", "", "| name | lhs | rhs | slack | status | citation |",
                      "|---|---|---|---|---|---|"]
            for c in self.certificates:
                lines.append(f"| {c.name} | {_fmt(c.lhs)} | {_fmt(c.rhs)} | {_fmt(c.slack)} | {c.status} | {c.citation} |")
            lines.append("")
        if self.checks:
            lines += ["## Checks", "", "| name | computed | reference | status |", "|---|---|---|---|"]
            for c in self.checks:
                lines.append(f"| {c.name} | {_fmt(c.computed)} | {_ref(c)} | {'ok' if c.ok else 'FAILED'} |")
            lines.append("")
        if self.notes:
            lines += ["## Notes", ""] + [f"- {n}" for n in self.notes] + [""]
        s = self.summary
        lines.append(", ".join(f"{k}: {s[k]}" for k in sorted(s)))
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "md":
            return self.to_markdown()
        raise ValueError(f"unknown format {fmt!r}")


def _ref(c: Check) -> str:
    if c.expected is not None:
        return _fmt(c.expected)
    if c.lo is not None and c.hi is not None:
        return f"[{_fmt(c.lo)}, {_fmt(c.hi)}]"
    if c.hi is not None:
        return f"<= {_fmt(c.hi)}"
    if c.lo is not None and math.isfinite(c.lo):
        return f">= {_fmt(c.lo)}"
    return "recorded"


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(round(v, 12))
    return str(v)


def _clean(obj):
    """Replace non-finite floats by None and numpy scalars by Python numbers."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj
