"""Three-valued answers for copy-hood questions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

COPY = "Copy"
NOT_COPY = "NotCopy"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    kind: str
    reason: str = ""
    witness: Any = None
    evidence: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in (COPY, NOT_COPY, INCONCLUSIVE):
            raise ValueError(f"unknown verdict {self.kind!r}")

    @property
    def is_copy(self) -> bool:
        return self.kind == COPY

    @property
    def is_not_copy(self) -> bool:
        return self.kind == NOT_COPY

    def __bool__(self) -> bool:
        raise TypeError("a Verdict is three-valued; test .is_copy or .kind")


def copy(reason: str = "", witness: Any = None, **evidence) -> Verdict:
    return Verdict(COPY, reason, witness, evidence)


def not_copy(reason: str, witness: Any = None, **evidence) -> Verdict:
    return Verdict(NOT_COPY, reason, witness, evidence)


def inconclusive(reason: str, witness: Optional[Any] = None, **evidence) -> Verdict:
    return Verdict(INCONCLUSIVE, reason, witness, evidence)
