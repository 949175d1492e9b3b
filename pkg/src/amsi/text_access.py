"""Substring extraction oracle.

Stands in for a compressed random-access structure: query code never
reads the text directly, it goes through a TextOracle.  The plain
in-memory backend stores the text verbatim; a compressed backend can be
slotted in without touching any query code.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

from amsi.counters import current_counters


class TextOracle(ABC):
    """Read-only access to T[1..n] (1-based positions)."""

    n: int

    @abstractmethod
    def extract(self, i: int, length: int) -> str:
        """Return T[i..i+length-1]; raises on out-of-range access."""

    def extract_reversed(self, i: int, length: int) -> str:
        """Return reverse(T[i..i+length-1])."""
        return self.extract(i, length)[::-1]


class InMemoryText(TextOracle):
    """Verbatim in-memory backend."""

    def __init__(self, text: str):
        self._text = text
        self.n = len(text)

    def extract(self, i: int, length: int) -> str:
        if length < 0:
            raise ValueError("negative length")
        if length == 0:
            if not 1 <= i <= self.n + 1:
                raise ValueError(f"position {i} out of range [1, {self.n + 1}]")
            return ""
        if i < 1 or i + length - 1 > self.n:
            raise ValueError(
                f"range [{i}, {i + length - 1}] outside text of length {self.n}"
            )
        current_counters().chars_extracted += length
        return self._text[i - 1 : i - 1 + length]
