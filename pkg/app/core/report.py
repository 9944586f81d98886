"""
Verifier reports: named boolean checks plus witnesses for the failures.
"""

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

from app.core.errors import VerificationFailed


@dataclass
class Report:
    kind: str
    checks: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def check(self, name: str, passed: bool, witness: Any = None) -> bool:
        """Record a check; the first witness of a failing check is kept."""
        self.checks[name] = self.checks.get(name, True) and bool(passed)
        if not passed and witness is not None and name not in self.witnesses:
            self.witnesses[name] = witness
        return bool(passed)

    def failed(self) -> list[str]:
        return [name for name, passed in self.checks.items() if not passed]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ok": self.ok,
            "checks": dict(sorted(self.checks.items())),
            "witnesses": _jsonable(self.witnesses),
            "stats": _jsonable(self.stats),
        }

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()

    def raise_if_failed(self) -> "Report":
        if not self.ok:
            raise VerificationFailed(
                f"{self.kind} verification failed: {', '.join(self.failed())}",
                witness=_jsonable(self.witnesses),
            )
        return self


def _jsonable(value: Any) -> Any:
    """Tuples, sets and frozensets to sorted lists so digests are stable."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (set, frozenset)):
        return sorted((_jsonable(v) for v in value), key=repr)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value
