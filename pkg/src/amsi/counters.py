"""Per-query operation counters.

Counters live in a context variable so that concurrent queries (thread
pool workers) each accumulate into their own instance.  A `partner` call
counts once; the range probes it performs internally are not billed
separately.  `range_queries` counts direct emptiness/predecessor/
successor calls made by engine code.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass


@dataclass
class Counters:
    partner_calls: int = 0
    range_queries: int = 0
    chars_extracted: int = 0
    rank_calls: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "partner_calls": self.partner_calls,
            "range_queries": self.range_queries,
            "chars_extracted": self.chars_extracted,
            "rank_calls": self.rank_calls,
        }


_current: ContextVar[Counters] = ContextVar("amsi_counters", default=Counters())


def current_counters() -> Counters:
    return _current.get()


@contextmanager
def collect_counters():
    """Collect counters for the enclosed block into a fresh instance."""
    counters = Counters()
    token = _current.set(counters)
    try:
        yield counters
    finally:
        _current.reset(token)
