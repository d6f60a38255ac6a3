"""Verification reports: per-check records with a summary verdict."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

PASS, FAIL, SKIP = "pass", "fail", "skip"


def encode_value(v):
    """JSON-safe encoding; complex numbers become ``{"re": .., "im": ..}``."""
    if isinstance(v, complex):
        return {"re": encode_value(v.real), "im": encode_value(v.imag)}
    if isinstance(v, float):
        return None if math.isnan(v) else v
    if hasattr(v, "item") and not isinstance(v, (list, tuple, dict)):
        return encode_value(v.item())
    if isinstance(v, (list, tuple)):
        return [encode_value(x) for x in v]
    return v


@dataclass
class CheckRecord:
    name: str
    expected: object
    computed: object
    tolerance: float | None
    status: str
    provenance: str = ""
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": encode_value(self.expected),
            "computed": encode_value(self.computed),
            "tolerance": self.tolerance,
            "pass": self.status != FAIL,
            "status": self.status,
            "provenance": self.provenance,
            "note": self.note,
        }


@dataclass
class VerificationReport:
    command: str
    provenance: dict
    records: list = field(default_factory=list)
    timings: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def check(self, name, expected, computed, tolerance, provenance="", note="") -> CheckRecord:
        """Compare numerically: ``|computed - expected| <= tolerance``."""
        try:
            err = abs(complex(computed) - complex(expected))
            ok = err <= tolerance if tolerance is not None else computed == expected
        except (TypeError, ValueError):
            ok = computed == expected
        if isinstance(computed, float) and math.isnan(computed):
            ok = False
        rec = CheckRecord(name, expected, computed, tolerance, PASS if ok else FAIL,
                          provenance, note)
        self.records.append(rec)
        return rec

    def fail(self, name, expected, error: Exception, provenance="") -> CheckRecord:
        rec = CheckRecord(name, expected, None, None, FAIL, provenance,
                          f"{type(error).__name__}: {error}")
        self.records.append(rec)
        return rec

    def skip(self, name, reason: str) -> CheckRecord:
        rec = CheckRecord(name, None, None, None, SKIP, "", reason)
        self.records.append(rec)
        return rec

    def to_dict(self, include_timings: bool = True) -> dict:
        d = {
            "command": self.command,
            "summary": {
                "pass": self.passed,
                "checks": len(self.records),
                "failed": sum(r.status == FAIL for r in self.records),
                "skipped": sum(r.status == SKIP for r in self.records),
            },
            "provenance": self.provenance,
            "records": [r.to_dict() for r in self.records],
            "notes": list(self.notes),
        }
        if include_timings:
            d["chern_results"] = list(self.timings)
        return d

    def __eq__(self, other) -> bool:
        if not isinstance(other, VerificationReport):
            return NotImplemented
        return self.to_dict(False) == other.to_dict(False)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "status", "expected", "computed", "tolerance", "provenance", "note"])
        for r in self.records:
            w.writerow([r.name, r.status, _flat(r.expected), _flat(r.computed),
                        "" if r.tolerance is None else repr(r.tolerance), r.provenance, r.note])
        return buf.getvalue()


def _flat(v) -> str:
    if v is None:
        return ""
    if isinstance(v, complex):
        return repr(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)
