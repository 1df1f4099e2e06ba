"""Check reports shared by the verification modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1


@dataclass
class Report:
    """Outcome of one verification suite.

    ``failures`` lists every violated identity as a dict with at least the
    keys ``identity`` and ``indices``; the first one carries a witness.
    """

    name: str
    passed: bool = True
    checked: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def fail(self, identity: str, indices, witness=None, **extra):
        self.passed = False
        entry = {"identity": identity, "indices": list(indices)}
        if witness is not None:
            entry["witness"] = str(witness)
        entry.update(extra)
        self.failures.append(entry)

    @property
    def witness(self):
        for f in self.failures:
            if "witness" in f:
                return f["witness"]
        return None

    def to_dict(self) -> dict[str, Any]:
        out = {"check": self.name, "passed": self.passed, "checked": self.checked}
        if self.failures:
            out["failures"] = self.failures
        if self.details:
            out["details"] = self.details
        return out

    def __bool__(self):
        return self.passed
