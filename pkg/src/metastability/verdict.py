"""
Verdict values returned by every certification check.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Optional


@dataclass(frozen=True)
class Verdict(object):
    """
    Outcome of a finite check.

    :ivar passed: whether the check holds.
    :ivar reason: short human-readable explanation, set on failure and on
        passes that rest on a structural argument rather than a scan.
    :ivar witness: the first counterexample on failure (a delta, an index,
        a pair), `None` otherwise.
    :ivar checked: number of elementary comparisons performed.
    """

    passed: bool
    reason: Optional[str] = None
    witness: Any = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def ok(cls, reason: Optional[str] = None, checked: int = 0) -> Verdict:
        return cls(True, reason, None, checked)

    @classmethod
    def fail(cls, reason: str, witness: Any = None, checked: int = 0) -> Verdict:
        return cls(False, reason, witness, checked)

    def to_json(self) -> Dict[str, Any]:
        result: Dict[str, Any] = dict(passed=self.passed, checked=self.checked)
        if self.reason is not None:
            result["reason"] = self.reason
        return result
