import itertools
from fractions import Fraction

import pytest

from amsi.attractor import (
    Parsing,
    SizeCapError,
    boundaries_to_parsing,
    compute_delta,
    lz_parse,
    repetitiveness_stats,
    validate_attractor,
)
from amsi.oracle import generate_instances
from amsi.suffixes import SuffixOrder

from conftest import (
    distinct_substring_counts,
    reference_lz_parse,
    reference_validate_attractor,
)


def test_lz_parse_examples():
    assert lz_parse("aaabbbcc").boundaries == (1, 3, 4, 6, 7, 8)
    assert lz_parse("aaabbbcc").B == 6
    assert lz_parse("").boundaries == ()
    assert lz_parse("").B == 0
    assert lz_parse("aaaa").boundaries == (1, 4)


def test_lz_parse_matches_reference():
    for fam, sigma in (("uniform", 2), ("uniform", 4), ("copy-paste", 2), ("fibonacci", 2)):
        for inst in itertools.islice(generate_instances(11, fam, 96, 8, sigma), 25):
            assert lz_parse(inst.text).boundaries == reference_lz_parse(inst.text), inst.text


def test_validate_attractor_examples():
    assert validate_attractor("aaabbbcc", [3, 6, 8]) is True
    assert validate_attractor("aaabbbcc", [3, 6]) is False
    assert validate_attractor("a", [1]) is True


def test_validate_attractor_matches_naive():
    import random

    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(1, 24)
        text = "".join(rng.choice("ab") for _ in range(n))
        k = rng.randint(1, n)
        positions = sorted(rng.sample(range(1, n + 1), k))
        assert validate_attractor(text, positions) == reference_validate_attractor(
            text, positions
        ), (text, positions)


def test_validate_attractor_size_cap():
    with pytest.raises(SizeCapError):
        validate_attractor("a" * 5000, [1])


def test_lz_boundaries_form_valid_attractor():
    for fam in ("uniform", "fibonacci", "copy-paste"):
        for inst in itertools.islice(generate_instances(2, fam, 256, 8, 2), 25):
            parsing = lz_parse(inst.text)
            assert validate_attractor(inst.text, parsing.boundaries), inst.text


def test_compute_delta_examples():
    assert compute_delta("aaabbbcc") == Fraction(3)
    assert compute_delta("aaaa") == Fraction(1)
    assert compute_delta("") == Fraction(0)


def test_delta_matches_enumeration():
    import random

    rng = random.Random(9)
    texts = ["abcabcabc", "banana", "a" * 50]
    for _ in range(25):
        n = rng.randint(1, 160)
        texts.append("".join(rng.choice("ab") for _ in range(n)))
    texts.append("".join(rng.choice("abcd") for _ in range(512)))
    for text in texts:
        counts = distinct_substring_counts(text)
        want = max((Fraction(d, k) for k, d in enumerate(counts, start=1)),
                   default=Fraction(0))
        assert compute_delta(text) == want, text


def test_dk_via_sa_lcp_matches_enumeration():
    import random

    rng = random.Random(13)
    for _ in range(20):
        n = rng.randint(1, 128)
        text = "".join(rng.choice("ab") for _ in range(n))
        so = SuffixOrder(text)
        lcp = list(so.lcp[1:])
        via_sa = [(n - k + 1) - sum(1 for v in lcp if v >= k) for k in range(1, n + 1)]
        assert via_sa == distinct_substring_counts(text), text


def test_delta_le_z():
    # delta <= sigma does NOT hold in general (all 3-mers present already
    # gives delta >= 8/3 on a binary alphabet); delta <= z always does.
    for fam in ("uniform", "fibonacci", "copy-paste"):
        for sigma in (2, 4, 26):
            for inst in itertools.islice(generate_instances(3, fam, 256, 8, sigma), 15):
                stats = repetitiveness_stats(inst.text)
                assert 1 <= stats.delta <= stats.z


def test_boundaries_to_parsing_examples():
    p = boundaries_to_parsing(8, [3, 6, 8])
    assert p.phrases("aaabbbcc") == ["aaa", "bbb", "cc"]
    p = boundaries_to_parsing(4, [1, 4])
    assert p.phrases("aaaa") == ["a", "aaa"]
    p = boundaries_to_parsing(5, [2])
    assert p.boundaries == (2, 5)
    with pytest.raises(ValueError):
        boundaries_to_parsing(4, [0, 4])
    with pytest.raises(ValueError):
        boundaries_to_parsing(4, [5])


def test_phrases_concatenate():
    for inst in itertools.islice(generate_instances(4, "uniform", 128, 8, 4), 20):
        parsing = lz_parse(inst.text)
        assert "".join(parsing.phrases(inst.text)) == inst.text


def test_parsing_invariants():
    with pytest.raises(ValueError):
        Parsing(5, (2, 2, 5))
    with pytest.raises(ValueError):
        Parsing(5, (2, 4))
    with pytest.raises(ValueError):
        Parsing(0, (1,))
    with pytest.raises(ValueError):
        Parsing(3, ())
