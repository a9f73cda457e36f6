"""Verification reports and their JSON / CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Union

from ..errors import ConfigInvalid, IoFailure

Value = Union[complex, Fraction, None]

FIELDS = ("suite_name", "instance", "lhs", "rhs", "abs_error", "rel_error", "pass",
          "runtime_ms", "provenance")
CSV_FIELDS = ("suite_name", "instance", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
              "abs_error", "rel_error", "pass", "runtime_ms", "provenance")


@dataclass(frozen=True)
class VerificationReport:
    suite_name: str
    instance: dict[str, str]
    lhs: Value
    rhs: Value
    abs_error: float | None
    rel_error: float | None
    passed: bool
    runtime_ms: int
    provenance: str

    def descriptor(self) -> str:
        return ";".join(f"{k}={v}" for k, v in sorted(self.instance.items()))

    def to_json(self) -> dict:
        return {
            "suite_name": self.suite_name,
            "instance": dict(sorted(self.instance.items())),
            "lhs": encode_value(self.lhs),
            "rhs": encode_value(self.rhs),
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "pass": self.passed,
            "runtime_ms": self.runtime_ms,
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, obj: dict) -> VerificationReport:
        missing = set(FIELDS) - set(obj)
        if missing:
            raise ConfigInvalid(f"report object lacks fields {sorted(missing)}")
        return cls(
            suite_name=obj["suite_name"],
            instance={str(k): str(v) for k, v in obj["instance"].items()},
            lhs=decode_value(obj["lhs"]),
            rhs=decode_value(obj["rhs"]),
            abs_error=obj["abs_error"],
            rel_error=obj["rel_error"],
            passed=bool(obj["pass"]),
            runtime_ms=int(obj["runtime_ms"]),
            provenance=obj["provenance"],
        )

    def without_timing(self) -> dict:
        d = self.to_json()
        d.pop("runtime_ms")
        return d


def encode_value(v: Value):
    """Exact rationals as {"num", "den"}, everything numeric else as {"re", "im"}."""
    if v is None:
        return None
    if isinstance(v, Fraction):
        return {"num": v.numerator, "den": v.denominator}
    if isinstance(v, int):
        return {"num": v, "den": 1}
    c = complex(v)
    return {"re": c.real, "im": c.imag}


def decode_value(obj) -> Value:
    if obj is None:
        return None
    if "num" in obj:
        return Fraction(int(obj["num"]), int(obj["den"]))
    return complex(float(obj["re"]), float(obj["im"]))


def _parts(v: Value) -> tuple[str, str]:
    if v is None:
        return "", ""
    if isinstance(v, Fraction):
        # the exact value lives in the JSON form; CSV carries the nearest double
        return f"{float(v):.17g}", "0"
    c = complex(v)
    return f"{c.real:.17g}", f"{c.imag:.17g}"


def _real(x: float | None) -> str:
    if x is None:
        return ""
    return f"{x:.17g}"


def to_csv(reports: Iterable[VerificationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in reports:
        lre, lim = _parts(r.lhs)
        rre, rim = _parts(r.rhs)
        w.writerow([r.suite_name, r.descriptor(), lre, lim, rre, rim,
                    _real(r.abs_error), _real(r.rel_error), "true" if r.passed else "false",
                    r.runtime_ms, r.provenance])
    return buf.getvalue()


def _finite_or_none(x):
    # JSON has no NaN or infinity
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def to_json(reports: Iterable[VerificationReport]) -> str:
    objs = []
    for r in reports:
        d = r.to_json()
        d["abs_error"] = _finite_or_none(d["abs_error"])
        d["rel_error"] = _finite_or_none(d["rel_error"])
        objs.append(d)
    return json.dumps(objs, indent=1, allow_nan=False) + "\n"


def render(reports: Iterable[VerificationReport], fmt: str) -> str:
    if fmt == "json":
        return to_json(reports)
    if fmt == "csv":
        return to_csv(reports)
    raise ConfigInvalid(f"unknown report format {fmt!r}")


def emit_report(reports: Iterable[VerificationReport], fmt: str, path: str | Path | None = None) -> str:
    """Serialize reports; write to ``path`` when given and return the text."""
    text = render(list(reports), fmt)
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as exc:
            raise IoFailure(f"cannot write {path}: {exc}") from exc
    return text


def load_reports(path: str | Path) -> list[VerificationReport]:
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"{path} is not a JSON report: {exc}") from exc
    if not isinstance(data, list):
        raise ConfigInvalid(f"{path}: expected a JSON array of reports")
    return [VerificationReport.from_json(o) for o in data]
