"""Three-valued verdicts and the JSON run report shared by the checkers and
the command line."""

from __future__ import annotations

import enum
import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable, TypeVar

from .digraph import CapacityError, VertexMap
from .search import SearchBudgetExceeded

__all__ = ["Check", "RunReport", "Verdict", "decide", "jsonable"]

T = TypeVar("T")


class Verdict(str, enum.Enum):
    TRUE = "true"
    FALSE = "false"
    INCONCLUSIVE = "inconclusive"

    @classmethod
    def of(cls, value: bool) -> "Verdict":
        return cls.TRUE if value else cls.FALSE

    def __and__(self, other: "Verdict") -> "Verdict":
        if Verdict.FALSE in (self, other):
            return Verdict.FALSE
        if Verdict.INCONCLUSIVE in (self, other):
            return Verdict.INCONCLUSIVE
        return Verdict.TRUE

    def __invert__(self) -> "Verdict":
        if self is Verdict.INCONCLUSIVE:
            return self
        return Verdict.FALSE if self is Verdict.TRUE else Verdict.TRUE


def decide(fn: Callable[[], T]) -> tuple[Verdict, T | None, str | None]:
    """Run a boolean-ish check and map budget or capacity exhaustion to
    INCONCLUSIVE. Returns ``(verdict, raw value, reason)``."""
    try:
        value = fn()
    except (SearchBudgetExceeded, CapacityError) as exc:
        return Verdict.INCONCLUSIVE, None, str(exc)
    ok = value is not None if isinstance(value, VertexMap) or value is None else bool(value)
    return Verdict.of(ok), value, None


def jsonable(obj: Any) -> Any:
    """Convert report payloads (maps, verdicts, dataclasses) to plain JSON."""
    if isinstance(obj, Verdict):
        return obj.value
    if isinstance(obj, VertexMap):
        return list(obj.images)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)


@dataclass
class Check:
    name: str
    verdict: Verdict
    detail: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return {"name": self.name, "verdict": self.verdict.value, **jsonable(self.detail)}


@dataclass
class RunReport:
    """Outcome of one command: a list of checks and an overall verdict.

    Wall-clock time is recorded only when ``timing`` is set, so that repeated
    runs with the same inputs print identical JSON.
    """

    command: str
    checks: list[Check] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)
    timing: bool = False
    _start: float = field(default_factory=time.perf_counter, repr=False)

    def add(self, name: str, verdict: Verdict, **detail: Any) -> Check:
        c = Check(name, verdict, detail)
        self.checks.append(c)
        return c

    @property
    def verdict(self) -> Verdict:
        v = Verdict.TRUE
        for c in self.checks:
            v = v & c.verdict
        return v

    @property
    def exit_code(self) -> int:
        return {Verdict.TRUE: 0, Verdict.FALSE: 1, Verdict.INCONCLUSIVE: 2}[self.verdict]

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "command": self.command,
            "verdict": self.verdict.value,
            "checks": [c.to_json() for c in self.checks],
        }
        if self.data:
            out["data"] = jsonable(self.data)
        if self.timing:
            out["seconds"] = round(time.perf_counter() - self._start, 3)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)
