"""Pass/fail records derived only from stored numbers."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


@dataclass
class Metric:
    name: str
    value: float
    tol: float
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return math.isfinite(self.value) and self.value <= self.tol

    def to_dict(self) -> dict:
        out = {"name": self.name, "value": self.value, "tol": self.tol, "passed": self.passed}
        out.update(self.extra)
        return out


@dataclass
class VerificationReport:
    name: str
    metrics: list[Metric] = field(default_factory=list)
    info: dict = field(default_factory=dict)
    error: str | None = None

    def add(self, name: str, value, tol: float, **extra) -> Metric:
        m = Metric(name, float(value), float(tol), extra)
        self.metrics.append(m)
        return m

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for m in other.metrics:
            self.metrics.append(Metric(prefix + m.name, m.value, m.tol, dict(m.extra)))
        if other.error and not self.error:
            self.error = other.error

    @property
    def passed(self) -> bool:
        return self.error is None and bool(self.metrics) and all(m.passed for m in self.metrics)

    @property
    def worst(self) -> Metric | None:
        if not self.metrics:
            return None
        return max(self.metrics, key=lambda m: m.value / m.tol if m.tol > 0 else math.inf)

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "passed": self.passed,
            "error": self.error,
            "metrics": [m.to_dict() for m in self.metrics],
            "info": self.info,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), default=_jsonable, sort_keys=True)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        w = self.worst
        detail = f"worst {w.name} = {w.value:.3e} (tol {w.tol:.1e})" if w else "no metrics"
        if self.error:
            detail = f"error: {self.error}"
        return f"{status} {self.name}: {detail}"


def _jsonable(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if hasattr(obj, "value"):
        return obj.value
    return str(obj)
