"""Check records and the versioned JSON verification report."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

from . import config

PASS = "pass"
FAIL = "fail"


def _plain(value: Any) -> Any:
    """JSON-safe copy of ``value``; numpy scalars and arrays become Python data."""
    if hasattr(value, "tolist"):
        value = value.tolist()
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, complex):
        return {"re": _plain(value.real), "im": _plain(value.imag)}
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


@dataclass
class Check:
    name: str
    status: str
    residual: float
    tolerance: float
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        return {
            "check_name": self.name,
            "status": self.status,
            "residual": _plain(float(self.residual)),
            "tolerance": float(self.tolerance),
            "details": _plain(self.details),
        }


def residual_check(name: str, residual: float, tolerance: float, **details) -> Check:
    """Pass when ``residual < tolerance``."""
    residual = float(residual)
    status = PASS if residual < tolerance else FAIL
    return Check(name, status, residual, tolerance, details)


def flag_check(name: str, ok: bool, **details) -> Check:
    """Pass/fail check with no numeric residual (residual 0 or 1)."""
    return Check(name, PASS if ok else FAIL, 0.0 if ok else 1.0, 0.5, details)


class VerificationReport(object):
    """Ordered checks for one algebra and (optionally) one simple root."""

    def __init__(self, algebra_id: str, beta_index: Optional[int] = None,
                 seed: int = config.DEFAULT_SEED):
        self.algebra_id = algebra_id
        self.beta_index = beta_index
        self.seed = seed
        self.sections: List[Check] = []
        self.started = datetime.now(timezone.utc).isoformat()
        self.finished: Optional[str] = None

    def add(self, check: Check) -> Check:
        if any(c.name == check.name for c in self.sections):
            raise ValueError(f"duplicate check name {check.name!r}")
        self.sections.append(check)
        return check

    def extend(self, checks) -> None:
        for check in checks:
            self.add(check)

    def finish(self) -> None:
        self.finished = datetime.now(timezone.utc).isoformat()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.sections)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.sections if not c.passed]

    def to_json(self) -> dict:
        return {
            "schema": config.REPORT_SCHEMA,
            "tool_version": config.TOOL_VERSION,
            "algebra_id": self.algebra_id,
            "beta_index": self.beta_index,
            "seed": self.seed,
            "status": PASS if self.passed else FAIL,
            "timestamps": {"started": self.started, "finished": self.finished},
            "sections": [c.to_json() for c in self.sections],
        }

    def render(self) -> str:
        beta = "all" if self.beta_index is None else str(self.beta_index)
        lines = [f"{self.algebra_id} (beta={beta}, seed={self.seed})"]
        for c in self.sections:
            lines.append(f"  {c.status.upper():4s}  {c.name}: residual {c.residual:.3e} (tol {c.tolerance:.1e})")
        lines.append(f"{len(self.sections) - len(self.failures)} passed, {len(self.failures)} failed")
        return "\n".join(lines)


def dumps(reports: List[VerificationReport]) -> str:
    """Sorted-key JSON of one report, or a list of several."""
    payload = reports[0].to_json() if len(reports) == 1 else [r.to_json() for r in reports]
    return json.dumps(payload, sort_keys=True, indent=2)
