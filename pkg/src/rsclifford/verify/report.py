"""Suite reports: named residual/tolerance cases plus wall time."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Case:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        # NaN never passes
        return bool(self.residual <= self.tol)

    def to_json(self) -> dict:
        r = self.residual
        return {"name": self.name, "residual": r if math.isfinite(r) else str(r),
                "tol": self.tol, "pass": self.passed}


@dataclass
class SuiteReport:
    suite: str
    params: dict
    cases: list = field(default_factory=list)
    wall_ms: int = 0

    def add(self, name: str, residual, tol: float) -> Case:
        c = Case(name, float(residual), float(tol))
        self.cases.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def to_json(self) -> dict:
        cases = sorted(self.cases, key=lambda c: c.name)
        return {"suite": self.suite, "params": _plain(self.params),
                "cases": [c.to_json() for c in cases], "wall_ms": int(self.wall_ms)}

    def to_text(self) -> str:
        lines = [f"suite {self.suite}  ({self.wall_ms} ms)"]
        for c in sorted(self.cases, key=lambda c: c.name):
            flag = "PASS" if c.passed else "FAIL"
            lines.append(f"  {flag}  {c.name:<40s} residual={c.residual:.3e}  tol={c.tol:.1e}")
        return "\n".join(lines)


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "tolist"):
        return v.tolist()
    return v


def dump(reports, fmt: str = "json") -> str:
    if fmt == "json":
        data = [r.to_json() for r in reports]
        return json.dumps(data[0] if len(data) == 1 else data, indent=2)
    return "\n".join(r.to_text() for r in reports)
