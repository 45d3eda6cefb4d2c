"""Shared result container for all search backends."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class SolveResult:
    """Solutions found by a search, with its counters.

    ``complete`` is true when the search space was exhausted; a run cut
    short by a limit sets ``truncated``, one cut short by a deadline sets
    ``timed_out``.
    """

    solutions: list = field(default_factory=list)
    stats: Any = None
    complete: bool = True
    truncated: bool = False
    timed_out: bool = False

    @property
    def found(self) -> bool:
        return bool(self.solutions)
