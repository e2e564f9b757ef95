from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Tuple


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a structural check; truthy iff valid.

    On failure ``axiom`` names the violated property and ``witness`` holds
    the offending labels (a degree, a basis pair or a basis triple).
    """

    valid: bool
    axiom: str = ""
    witness: Tuple[Any, ...] = field(default_factory=tuple)
    detail: str = ""

    def __bool__(self):
        return self.valid

    @classmethod
    def ok(cls):
        return cls(True)

    @classmethod
    def fail(cls, axiom, witness=(), detail=""):
        return cls(False, axiom, tuple(witness), detail)

    def as_dict(self):
        out = {"valid": self.valid}
        if not self.valid:
            out.update(axiom=self.axiom, witness=[str(w) for w in self.witness], detail=self.detail)
        return out
