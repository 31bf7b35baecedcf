"""Boolean check results that carry a witness for the failing (or deciding) case."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Verdict:
    """Outcome of a decidable check.

    Truthiness follows ``ok``, so verdicts can be used directly in
    conditions while still exposing the witness that decided them.
    """

    ok: bool
    witness: Any = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok
