"""Named pass/fail records collected by the verification suites."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from towerlab.errors import IdentityViolation


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""
    count: int = 1


@dataclass
class CheckList:
    items: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "", count: int = 1) -> bool:
        self.items.append(Check(name, bool(ok), detail, count))
        return bool(ok)

    def extend(self, other: Iterable[Check]) -> None:
        self.items.extend(other)

    def __iter__(self):
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.items)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.items if not c.ok]

    def require(self) -> None:
        bad = self.failures
        if bad:
            names = ", ".join(f"{c.name} ({c.detail})" if c.detail else c.name for c in bad)
            raise IdentityViolation(names)
