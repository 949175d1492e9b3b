"""Attractor-parsed matching-statistics index for repetitive texts.

Builds a compressed index over a text (two Patricia trees over parsing
phrases and boundary suffixes, plus a rank-space grid) and answers
matching-statistics queries through three interchangeable engines.
"""

from amsi.attractor import (
    Parsing,
    RepetitivenessStats,
    boundaries_to_parsing,
    compute_delta,
    lz_parse,
    repetitiveness_stats,
    validate_attractor,
)
from amsi.counters import Counters, collect_counters, current_counters
from amsi.index import MSIndex, build_index
from amsi.ms_basic import compute_ms_basic
from amsi.ms_const import compute_ms_const
from amsi.ms_lpmem import LPMEM, compute_ms_lpmem, enumerate_lpmems
from amsi.text_access import InMemoryText, TextOracle

__all__ = [
    "Parsing",
    "RepetitivenessStats",
    "lz_parse",
    "validate_attractor",
    "compute_delta",
    "boundaries_to_parsing",
    "repetitiveness_stats",
    "TextOracle",
    "InMemoryText",
    "Counters",
    "collect_counters",
    "current_counters",
    "MSIndex",
    "build_index",
    "compute_ms_basic",
    "compute_ms_lpmem",
    "compute_ms_const",
    "enumerate_lpmems",
    "LPMEM",
]
