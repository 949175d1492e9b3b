"""Brute-force reference implementations and instance generation.

These share no code with the query engines: matching statistics by
plain substring search, LPMEMs by direct character comparison around
every boundary.  They exist to pin expected values in tests.
"""

from __future__ import annotations

import random
import string
import zlib
from dataclasses import dataclass

from amsi.attractor import VALIDATE_CAP, SizeCapError
from amsi.ms_lpmem import LPMEM

ALPHABETS = {2: "ab", 4: "abcd", 26: string.ascii_lowercase}
FAMILIES = ("uniform", "fibonacci", "copy-paste")


@dataclass(frozen=True)
class TestInstance:
    text: str
    pattern: str
    boundaries: tuple[int, ...] | None  # None = use the LZ parse
    tag: str


def naive_ms(text: str, pattern: str) -> list[int]:
    """Decreasing-length scan for the longest prefix of each pattern
    suffix that occurs anywhere in the text."""
    m = len(pattern)
    ms = [0] * m
    for i in range(m):
        for length in range(m - i, 0, -1):
            if pattern[i : i + length] in text:
                ms[i] = length
                break
    return ms


def naive_lpmems(text: str, pattern: str, boundaries) -> set[LPMEM]:
    """LPMEMs by brute force around every boundary.

    A pattern substring of length >= 2 is an LPMEM when, for some split
    position inside it, a boundary carries a matching phrase suffix and
    following-suffix prefix (the right part may be empty) and neither
    extending the left part by one pattern character at that split nor
    the right part is supported by any boundary; pattern edges are
    non-extendable.
    """
    n, m = len(text), len(pattern)
    if n > VALIDATE_CAP:
        raise SizeCapError(f"text length {n} exceeds cap {VALIDATE_CAP}")
    bs = sorted(set(int(b) for b in boundaries) | ({n} if n else set()))
    if bs and (bs[0] < 1 or bs[-1] > n):
        raise ValueError("boundaries must lie in [1, n]")
    out: set[LPMEM] = set()
    if n == 0 or m == 0:
        return out
    phrase_start = {}
    prev = 0
    for b in bs:
        phrase_start[b] = prev
        prev = b
    for s in range(1, m + 1):
        # best_at[lam] = longest supported right part among boundaries
        # whose phrase suffix matches exactly >= lam left characters
        best_at = [-1] * (s + 2)
        for b in bs:
            pstart = phrase_start[b]
            lam = 0
            while lam < s and lam < b - pstart and pattern[s - 1 - lam] == text[b - 1 - lam]:
                lam += 1
            if lam == 0:
                continue
            rho = 0
            while s + rho < m and b + rho < n and pattern[s + rho] == text[b + rho]:
                rho += 1
            if rho > best_at[lam]:
                best_at[lam] = rho
        # F[x] = max right part over boundaries matching >= x left chars
        f = [-1] * (s + 2)
        for x in range(s, 0, -1):
            f[x] = max(best_at[x], f[x + 1])
        for x in range(1, s + 1):
            y = f[x]
            if y < 0 or x + y < 2:
                continue
            if x == s or f[x + 1] < y:  # left part not extendable at this split
                out.add(LPMEM(s - x + 1, x + y))
    return out


def fibonacci_word(n: int) -> str:
    """Prefix of the infinite word defined by s_k = s_{k-1} s_{k-2}."""
    if n <= 0:
        return ""
    prev, cur = "a", "ab"
    while len(cur) < n:
        prev, cur = cur, cur + prev
    return cur[:n]


def _rng_for(*parts) -> random.Random:
    seed = zlib.crc32(repr(parts).encode())
    return random.Random(seed)


def copy_paste_text(rng: random.Random, alphabet: str, n: int, rate: float) -> str:
    """A seed block pasted repeatedly, each pasted character mutated with
    probability `rate`; rate 0 yields a purely periodic text."""
    block = min(max(2, n // 16), n)
    chars = [rng.choice(alphabet) for _ in range(block)]
    seed_block = chars[:]
    while len(chars) < n:
        piece = [rng.choice(alphabet) if rate > 0 and rng.random() < rate else c
                 for c in seed_block]
        chars.extend(piece)
    return "".join(chars[:n])


def _pattern_for(rng: random.Random, text: str, alphabet: str, m_max: int) -> str:
    m = rng.randint(1, m_max)
    mode = rng.randrange(3)
    if mode == 0 or not text:
        return "".join(rng.choice(alphabet) for _ in range(m))
    m = min(m, len(text))
    start = rng.randrange(0, len(text) - m + 1)
    piece = list(text[start : start + m])
    if mode == 2:
        for _ in range(max(1, m // 8)):
            piece[rng.randrange(m)] = rng.choice(alphabet)
    return "".join(piece)


def generate_instances(seed: int, family: str, n_max: int, m_max: int, sigma: int):
    """Deterministic endless stream of test instances."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if sigma not in ALPHABETS:
        raise ValueError(f"sigma must be one of {sorted(ALPHABETS)}")
    alphabet = ALPHABETS[sigma]
    rng = _rng_for(seed, family, n_max, m_max, sigma)
    counter = 0
    while True:
        counter += 1
        n = rng.randint(1, n_max)
        if family == "uniform":
            text = "".join(rng.choice(alphabet) for _ in range(n))
        elif family == "fibonacci":
            text = fibonacci_word(n)
        else:
            rate = rng.choice([0.0, 0.0, 0.02, 0.1])
            text = copy_paste_text(rng, alphabet, n, rate)
        pattern = _pattern_for(rng, text, alphabet, m_max)
        boundaries: tuple[int, ...] | None = None
        if rng.random() < 0.15:
            # a superset of a valid attractor is still a valid attractor
            from amsi.attractor import lz_parse

            base = set(lz_parse(text).boundaries)
            extra = {rng.randint(1, n) for _ in range(rng.randint(0, 4))}
            boundaries = tuple(sorted(base | extra))
        yield TestInstance(text, pattern, boundaries, f"{family}/{sigma}#{counter}")
