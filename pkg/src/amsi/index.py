"""The assembled index: parsing, oracle, both trees, grid, and the
engine-specific structures, built in one pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

from amsi.attractor import (
    Parsing,
    RepetitivenessStats,
    boundaries_to_parsing,
    lz_parse,
    repetitiveness_stats,
)
from amsi.grid import Grid, build_grid
from amsi.ms_const import ActiveLevelIndex, build_active_index
from amsi.ms_lpmem import HeavyPathDecomp, LightStructure, build_special_structures
from amsi.patricia import PatriciaTree, build_trees
from amsi.suffixes import SuffixOrder
from amsi.text_access import InMemoryText, TextOracle

ALL_ENGINES = ("basic", "lpmem", "const")


@dataclass
class MSIndex:
    """Everything needed to answer matching-statistics queries."""

    oracle: TextOracle
    parsing: Parsing
    trev: PatriciaTree
    tsuf: PatriciaTree
    grid: Grid
    hp_rev: HeavyPathDecomp
    hp_suf: HeavyPathDecomp
    special: dict[int, LightStructure] | None
    active: ActiveLevelIndex | None
    epsilon: float
    dispatch_c: float
    stats: RepetitivenessStats
    engines: tuple[str, ...] = field(default=ALL_ENGINES)


def build_index(text: str, boundaries=None, *, epsilon: float = 0.5,
                dispatch_c: float = 1.0,
                engines: tuple[str, ...] = ALL_ENGINES) -> MSIndex:
    """Build the full index for a text.

    boundaries: optional attractor positions (1-based); defaults to the
    LZ parse.  `engines` selects which query structures to prepare; the
    dispatching engine needs the LPMEM structures, so requesting "const"
    implies "lpmem".
    """
    engines = tuple(engines)
    for e in engines:
        if e not in ALL_ENGINES:
            raise ValueError(f"unknown engine {e!r}")
    if "const" in engines and "lpmem" not in engines:
        engines = tuple(dict.fromkeys(engines + ("lpmem",)))

    order = SuffixOrder(text)
    if boundaries is None:
        parsing = lz_parse(text, order)
    else:
        parsing = boundaries_to_parsing(len(text), boundaries)
    stats = repetitiveness_stats(text, parsing, order)
    del order

    oracle = InMemoryText(text)
    trev, tsuf = build_trees(parsing, oracle)
    grid = build_grid(parsing, trev, tsuf)
    hp_rev = HeavyPathDecomp(trev)
    hp_suf = HeavyPathDecomp(tsuf)

    index = MSIndex(
        oracle=oracle,
        parsing=parsing,
        trev=trev,
        tsuf=tsuf,
        grid=grid,
        hp_rev=hp_rev,
        hp_suf=hp_suf,
        special=None,
        active=None,
        epsilon=epsilon,
        dispatch_c=dispatch_c,
        stats=stats,
        engines=engines,
    )
    if "lpmem" in engines:
        index.special = build_special_structures(index)
    if "const" in engines:
        index.active = build_active_index(trev, grid, epsilon)
    return index


def compute_ms(pattern: str, index: MSIndex, engine: str) -> list[int]:
    """Run one engine by name."""
    if engine == "basic":
        from amsi.ms_basic import compute_ms_basic

        return compute_ms_basic(pattern, index)
    if engine == "lpmem":
        from amsi.ms_lpmem import compute_ms_lpmem

        return compute_ms_lpmem(pattern, index)
    if engine == "const":
        from amsi.ms_const import compute_ms_const

        return compute_ms_const(pattern, index)
    raise ValueError(f"unknown engine {engine!r}")
