"""Check records and the JSON/text report they are collected into."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1


def _round(x: float) -> float:
    # 6 significant digits keep reports byte-stable across BLAS summation order
    if x is None or not math.isfinite(x):
        return None
    return float(f"{x:.6e}")


@dataclass
class CheckRecord:
    name: str
    identity: str
    configuration: str
    passed: bool
    residual: float = 0.0
    threshold: float = 0.0
    samples: int = 1
    degenerate: bool = False
    skipped: bool = False
    error: str | None = None
    value: Any = None
    elapsed: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "name": self.name,
            "identity": self.identity,
            "configuration": self.configuration,
            "passed": bool(self.passed),
            "residual": _round(float(self.residual)),
            "threshold": float(self.threshold),
            "samples": int(self.samples),
            "degenerate": bool(self.degenerate),
            "skipped": bool(self.skipped),
            "error": self.error,
        }
        if self.value is not None:
            out["value"] = _jsonable(self.value)
        if include_timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out


def _jsonable(v):
    if isinstance(v, float):
        return _round(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return _jsonable(v.item())
    return v


@dataclass
class Report:
    kind: str
    config: dict = field(default_factory=dict)
    checks: list[CheckRecord] = field(default_factory=list)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.checks.append(record)
        return record

    def extend(self, records) -> None:
        self.checks.extend(records)

    @property
    def failures(self) -> list[CheckRecord]:
        return [c for c in self.checks if not c.passed and not c.skipped]

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def exit_status(self) -> int:
        return 0 if self.ok else 1

    def summary(self) -> dict:
        return {
            "total": len(self.checks),
            "passed": sum(1 for c in self.checks if c.passed and not c.skipped),
            "failed": len(self.failures),
            "skipped": sum(1 for c in self.checks if c.skipped),
            "degenerate": sum(1 for c in self.checks if c.degenerate),
        }

    def select(self, prefix: str) -> list[CheckRecord]:
        return [c for c in self.checks if c.name.startswith(prefix)]

    def to_dict(self, include_timing: bool = False) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "config": _jsonable(self.config),
            "checks": [c.to_dict(include_timing) for c in self.checks],
            "summary": self.summary(),
        }

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True) + "\n"

    def to_text(self, include_timing: bool = False) -> str:
        lines = []
        for c in self.checks:
            status = "SKIP" if c.skipped else ("PASS" if c.passed else "FAIL")
            extra = " [degenerate]" if c.degenerate else ""
            if c.error:
                extra += f" error={c.error}"
            if c.value is not None:
                extra += f" value={_jsonable(c.value)}"
            if include_timing:
                extra += f" ({c.elapsed:.3f}s)"
            lines.append(
                f"{status} {c.name:<40} {c.configuration:<45} residual={c.residual:.2e}"
                f" <= {c.threshold:.0e}{extra}"
            )
        s = self.summary()
        lines.append(
            f"{s['passed']} passed, {s['failed']} failed, {s['skipped']} skipped"
            f" ({s['degenerate']} degenerate) of {s['total']} checks"
        )
        return "\n".join(lines) + "\n"
