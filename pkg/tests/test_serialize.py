import itertools
import struct

import pytest

from amsi.counters import collect_counters
from amsi.index import build_index, compute_ms
from amsi.oracle import generate_instances
from amsi.serialize import ContainerError, load_index, save_index


def test_round_trip_bit_identical(tmp_path):
    for inst in itertools.islice(generate_instances(91, "copy-paste", 160, 24, 4), 12):
        idx = build_index(inst.text, inst.boundaries)
        path = tmp_path / "idx.amsi"
        save_index(idx, path)
        loaded = load_index(path)
        for engine in ("basic", "lpmem", "const"):
            with collect_counters() as c1:
                a = compute_ms(inst.pattern, idx, engine)
            with collect_counters() as c2:
                b = compute_ms(inst.pattern, loaded, engine)
            assert a == b
            assert c1.as_dict() == c2.as_dict()


def test_round_trip_preserves_stats(tmp_path):
    idx = build_index("aaabbbcc")
    path = tmp_path / "x.amsi"
    sizes = save_index(idx, path)
    assert set(sizes) == {"meta", "text", "parsing", "trev", "tsuf", "grid",
                          "special", "active"}
    loaded = load_index(path)
    assert loaded.stats == idx.stats
    assert loaded.parsing == idx.parsing
    assert loaded.epsilon == idx.epsilon


def test_partial_engines_round_trip(tmp_path):
    idx = build_index("mississippi", engines=("basic",))
    path = tmp_path / "b.amsi"
    sizes = save_index(idx, path)
    assert "special" not in sizes and "active" not in sizes
    loaded = load_index(path)
    assert loaded.special is None and loaded.active is None
    assert compute_ms("issi", loaded, "basic") == compute_ms("issi", idx, "basic")


def test_bad_magic(tmp_path):
    path = tmp_path / "bad.amsi"
    path.write_bytes(b"NOPE" + b"\0" * 64)
    with pytest.raises(ContainerError, match="magic"):
        load_index(path)


def test_version_mismatch(tmp_path):
    idx = build_index("abcabc")
    path = tmp_path / "v.amsi"
    save_index(idx, path)
    blob = bytearray(path.read_bytes())
    blob[4:6] = struct.pack("<H", 9)
    path.write_bytes(bytes(blob))
    with pytest.raises(ContainerError, match="version"):
        load_index(path)


def test_checksum_tamper(tmp_path):
    idx = build_index("abcabc")
    path = tmp_path / "t.amsi"
    save_index(idx, path)
    blob = bytearray(path.read_bytes())
    blob[-1] ^= 0xFF  # flip a byte in the last section payload
    path.write_bytes(bytes(blob))
    with pytest.raises(ContainerError, match="checksum"):
        load_index(path)


def test_truncated(tmp_path):
    idx = build_index("abcabc")
    path = tmp_path / "tr.amsi"
    save_index(idx, path)
    blob = path.read_bytes()
    path.write_bytes(blob[: len(blob) - 10])
    with pytest.raises(ContainerError):
        load_index(path)
