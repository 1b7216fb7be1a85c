from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Verdict:
    """Structured outcome of one checked claim.

    ``certified`` is False whenever the outcome rests on a randomized lower
    bound that no a priori upper bound confirms.
    """

    claim: str
    params: dict[str, Any]
    computed: dict[str, Any]
    expected: dict[str, Any]
    passed: bool
    mode: str
    seed: Any = None
    certified: bool = True
    runtime_ms: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        if not self.passed:
            return "fail"
        return "pass" if self.certified else "uncertified"

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "params": self.params,
            "computed": self.computed,
            "expected": self.expected,
            "pass": self.passed,
            "certified": self.certified,
            "status": self.status,
            "mode": self.mode,
            "seed": self.seed,
            "runtime_ms": round(self.runtime_ms, 3),
            "notes": self.notes,
        }

    def __repr__(self) -> str:
        return f"[{self.status.upper()}] {self.claim} {self.params}"


@contextmanager
def timed():
    box = {"ms": 0.0}
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box["ms"] = (time.perf_counter() - t0) * 1000
