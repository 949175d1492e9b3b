"""Index container format.

Little-endian binary layout: magic "AMSI", a 16-bit format version, a
section table (8-byte name, offset, length, CRC-32 per section), then
the payloads.  Sections: meta, text, parsing, trev, tsuf, grid,
special, active; the last two are present only when the corresponding
engines were built.  All lengths and offsets are 64-bit.
"""

from __future__ import annotations

import struct
import zlib
from fractions import Fraction

import numpy as np

from amsi.attractor import Parsing, RepetitivenessStats
from amsi.grid import build_grid
from amsi.index import ALL_ENGINES, MSIndex
from amsi.ms_const import ActiveLevelIndex
from amsi.ms_lpmem import HeavyPathDecomp, LightStructure, _SubNode
from amsi.patricia import Node, PatriciaTree
from amsi.text_access import InMemoryText

MAGIC = b"AMSI"
VERSION = 1


class ContainerError(ValueError):
    """Malformed, corrupted, or incompatible index container."""


def _u64s(values) -> bytes:
    return np.asarray(list(values), dtype="<u8").tobytes()


def _i64s(values) -> bytes:
    return np.asarray(list(values), dtype="<i8").tobytes()


class _Reader:
    def __init__(self, payload: bytes):
        self.buf = payload
        self.off = 0

    def chunk(self, size: int) -> bytes:
        if self.off + size > len(self.buf):
            raise ContainerError("section payload truncated")
        out = self.buf[self.off : self.off + size]
        self.off += size
        return out

    def unpack(self, fmt: str):
        return struct.unpack("<" + fmt, self.chunk(struct.calcsize("<" + fmt)))

    def u64s(self, count: int) -> np.ndarray:
        return np.frombuffer(self.chunk(8 * count), dtype="<u8").astype(np.int64)

    def i64s(self, count: int) -> np.ndarray:
        return np.frombuffer(self.chunk(8 * count), dtype="<i8").astype(np.int64)


# ---- per-section encoders -------------------------------------------


def _encode_meta(index: MSIndex) -> bytes:
    mask = sum({"basic": 1, "lpmem": 2, "const": 4}[e] for e in index.engines)
    st = index.stats
    return struct.pack(
        "<ddIBxxxQQQQ",
        index.epsilon,
        index.dispatch_c,
        mask,
        0,  # text codec: 0 = utf-8 inline
        st.z,
        st.gamma_prime,
        st.delta.numerator,
        st.delta.denominator,
    )


def _decode_meta(payload: bytes):
    eps, dc, mask, _codec, z, gp, num, den = struct.unpack("<ddIBxxxQQQQ", payload)
    engines = tuple(e for bit, e in ((1, "basic"), (2, "lpmem"), (4, "const")) if mask & bit)
    stats = RepetitivenessStats(int(z), int(gp), Fraction(int(num), int(den)))
    return eps, dc, engines, stats


def _encode_parsing(parsing: Parsing) -> bytes:
    return struct.pack("<QQ", parsing.n, parsing.B) + _u64s(parsing.boundaries)


def _decode_parsing(payload: bytes) -> Parsing:
    r = _Reader(payload)
    n, b = r.unpack("QQ")
    return Parsing(int(n), tuple(int(x) for x in r.u64s(int(b))))


def _encode_tree(tree: PatriciaTree) -> bytes:
    nodes = tree.nodes
    cnt = len(nodes)
    parts = [struct.pack("<QQ", cnt, len(tree.rank_to_leaf))]
    parts.append(_i64s(-1 if nd.parent is None else nd.parent.id for nd in nodes))
    parts.append(_u64s(nd.sdepth for nd in nodes))
    parts.append(_u64s(nd.xlo for nd in nodes))
    parts.append(_u64s(nd.xhi for nd in nodes))
    parts.append(_u64s(nd.nleaves for nd in nodes))
    parts.append(_u64s(nd.rep for nd in nodes))
    parts.append(_u64s(nd.rep_len for nd in nodes))
    parts.append(bytes(1 if nd.is_leaf else 0 for nd in nodes))
    parts.append(_u64s(len(nd.children) for nd in nodes))
    for nd in nodes:
        parts.append(_u64s(c.id for c in nd.children))
        first_of = {id(child): first for first, child in nd.child_by_first.items()}
        firsts = [-1 if first_of[id(c)] is None else ord(first_of[id(c)])
                  for c in nd.children]
        parts.append(np.asarray(firsts, dtype="<i4").tobytes())
    parts.append(_u64s(len(nd.boundaries) for nd in nodes))
    for nd in nodes:
        if nd.boundaries:
            parts.append(_u64s(nd.boundaries))
    parts.append(_u64s(leaf.id for leaf in tree.rank_to_leaf))
    return b"".join(parts)


def _decode_tree(payload: bytes, tag: str, oracle: InMemoryText) -> PatriciaTree:
    r = _Reader(payload)
    cnt, ranks = (int(x) for x in r.unpack("QQ"))
    parent = r.i64s(cnt)
    sdepth = r.u64s(cnt)
    xlo = r.u64s(cnt)
    xhi = r.u64s(cnt)
    nleaves = r.u64s(cnt)
    rep = r.u64s(cnt)
    rep_len = r.u64s(cnt)
    leaf_flags = r.chunk(cnt)
    child_counts = r.u64s(cnt)
    nodes = [Node(int(sdepth[i]), int(rep[i]), int(rep_len[i]), bool(leaf_flags[i]))
             for i in range(cnt)]
    for i, nd in enumerate(nodes):
        nd.id = i
        nd.xlo, nd.xhi = int(xlo[i]), int(xhi[i])
        nd.nleaves = int(nleaves[i])
        if parent[i] >= 0:
            nd.parent = nodes[parent[i]]
    for i, nd in enumerate(nodes):
        ids = r.u64s(int(child_counts[i]))
        firsts = np.frombuffer(r.chunk(4 * int(child_counts[i])), dtype="<i4")
        for slot, (cid, f) in enumerate(zip(ids, firsts)):
            child = nodes[int(cid)]
            child.slot = slot
            child.ndepth = nd.ndepth + 1
            nd.children.append(child)
            nd.child_by_first[None if f < 0 else chr(int(f))] = child
    bcounts = r.u64s(cnt)
    for i, nd in enumerate(nodes):
        if bcounts[i]:
            nd.boundaries = tuple(int(x) for x in r.u64s(int(bcounts[i])))
    rank_ids = r.u64s(ranks)
    rank_to_leaf = [nodes[int(i)] for i in rank_ids]
    return PatriciaTree(tag, nodes, rank_to_leaf, oracle)


def _encode_active(act: ActiveLevelIndex) -> bytes:
    ids = sorted(act.s_arrays)
    parts = [struct.pack("<IQ", act.levels, len(ids))]
    for nid in ids:
        s = act.s_arrays[nid]
        rarr = act.r_arrays[nid]
        parts.append(struct.pack("<QQQ", nid, len(s), len(rarr)))
        parts.append(_u64s(s))
        parts.append(np.asarray(rarr, dtype="<u4").tobytes())
    return b"".join(parts)


def _decode_active(payload: bytes, epsilon: float) -> ActiveLevelIndex:
    r = _Reader(payload)
    levels, count = r.unpack("IQ")
    act = ActiveLevelIndex.__new__(ActiveLevelIndex)
    act.epsilon = epsilon
    act.levels = int(levels)
    act.s_arrays, act.r_arrays, act.rank_pos = {}, {}, {}
    for _ in range(int(count)):
        nid, slen, rlen = (int(x) for x in r.unpack("QQQ"))
        s = [int(x) for x in r.u64s(slen)]
        rarr = [int(x) for x in np.frombuffer(r.chunk(4 * rlen), dtype="<u4")]
        act.s_arrays[nid] = s
        act.r_arrays[nid] = rarr
        pos: list[list[int]] = []
        for j, slot in enumerate(rarr, start=1):
            while slot >= len(pos):
                pos.append([])
            pos[slot].append(j)
        act.rank_pos[nid] = pos
    return act


def _encode_special(structures: dict[int, LightStructure]) -> bytes:
    parts = [struct.pack("<Q", len(structures))]
    for wid in sorted(structures):
        st = structures[wid]
        subs = st.subnodes
        pos = {id(sn): i for i, sn in enumerate(subs)}
        parts.append(struct.pack("<QIQ", wid, len(st.special_leaves), len(subs)))
        parts.append(_u64s(leaf.id for leaf in st.special_leaves))
        parts.append(_u64s(sn.rev.id for sn in subs))
        parts.append(_i64s(-1 if sn.parent is None else pos[id(sn.parent)] for sn in subs))
        parts.append(_i64s(sn.gmax for sn in subs))
        parts.append(_i64s(-1 if sn.suf_partner is None else sn.suf_partner.id for sn in subs))
        parts.append(bytes(1 if sn.sky else 0 for sn in subs))
        parts.append(_i64s(-1 if sn.up_sky is None else pos[id(sn.up_sky)] for sn in subs))
        parts.append(_i64s(sn.up_slot for sn in subs))
        parts.append(_u64s(len(sn.children) for sn in subs))
        for sn in subs:
            parts.append(_u64s(pos[id(c)] for c in sn.children))
            parts.append(bytes(1 if ok else 0 for ok in sn.child_ok))
    return b"".join(parts)


def _decode_special(payload: bytes, trev: PatriciaTree, tsuf: PatriciaTree
                    ) -> dict[int, LightStructure]:
    r = _Reader(payload)
    (count,) = r.unpack("Q")
    out: dict[int, LightStructure] = {}
    for _ in range(int(count)):
        wid, nleaves, nsubs = (int(x) for x in r.unpack("QIQ"))
        leaves = [trev.nodes[int(i)] for i in r.u64s(nleaves)]
        rev_ids = r.u64s(nsubs)
        parents = r.i64s(nsubs)
        gmax = r.i64s(nsubs)
        partners = r.i64s(nsubs)
        sky = r.chunk(nsubs)
        up = r.i64s(nsubs)
        up_slot = r.i64s(nsubs)
        ccount = r.u64s(nsubs)
        subs = [_SubNode(trev.nodes[int(i)]) for i in rev_ids]
        for i, sn in enumerate(subs):
            sn.gmax = int(gmax[i])
            sn.suf_partner = None if partners[i] < 0 else tsuf.nodes[int(partners[i])]
            sn.sky = bool(sky[i])
            sn.up_slot = int(up_slot[i])
            if parents[i] >= 0:
                sn.parent = subs[int(parents[i])]
            if up[i] >= 0:
                sn.up_sky = subs[int(up[i])]
        for i, sn in enumerate(subs):
            ids = r.u64s(int(ccount[i]))
            oks = r.chunk(int(ccount[i]))
            sn.children = [subs[int(j)] for j in ids]
            sn.child_ok = [bool(b) for b in oks]
        out[wid] = LightStructure(tsuf.nodes[wid], leaves, subs)
    return out


# ---- container ------------------------------------------------------


def _sections_of(index: MSIndex) -> list[tuple[str, bytes]]:
    text = index.oracle.extract(1, index.oracle.n) if index.oracle.n else ""
    sections = [
        ("meta", _encode_meta(index)),
        ("text", text.encode("utf-8")),
        ("parsing", _encode_parsing(index.parsing)),
        ("trev", _encode_tree(index.trev)),
        ("tsuf", _encode_tree(index.tsuf)),
        ("grid", struct.pack("<Q", index.grid.B) + _u64s(index.grid.y_of_x)),
    ]
    if index.special is not None:
        sections.append(("special", _encode_special(index.special)))
    if index.active is not None:
        sections.append(("active", _encode_active(index.active)))
    return sections


def save_index(index: MSIndex, path) -> dict[str, int]:
    """Write the container; returns bytes per section."""
    sections = _sections_of(index)
    header_len = 4 + 2 + 2 + 32 * len(sections)
    table = b""
    body = b""
    offset = header_len
    sizes: dict[str, int] = {}
    for name, payload in sections:
        crc = zlib.crc32(payload) & 0xFFFFFFFF
        table += struct.pack("<8sQQII", name.encode("ascii").ljust(8, b"\0"),
                             offset, len(payload), crc, 0)
        body += payload
        sizes[name] = len(payload)
        offset += len(payload)
    blob = MAGIC + struct.pack("<HH", VERSION, len(sections)) + table + body
    with open(path, "wb") as fh:
        fh.write(blob)
    return sizes


def load_index(path) -> MSIndex:
    """Read and verify a container, rebuilding derived structures."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise ContainerError("bad magic; not an index container")
    version, count = struct.unpack_from("<HH", blob, 4)
    if version != VERSION:
        raise ContainerError(f"unsupported container version {version}")
    sections: dict[str, bytes] = {}
    off = 8
    for _ in range(count):
        name_raw, s_off, s_len, crc, _pad = struct.unpack_from("<8sQQII", blob, off)
        off += 32
        name = name_raw.rstrip(b"\0").decode("ascii")
        payload = blob[s_off : s_off + s_len]
        if len(payload) != s_len:
            raise ContainerError(f"section {name} truncated")
        if zlib.crc32(payload) & 0xFFFFFFFF != crc:
            raise ContainerError(f"checksum mismatch in section {name}")
        sections[name] = payload
    for required in ("meta", "text", "parsing", "trev", "tsuf", "grid"):
        if required not in sections:
            raise ContainerError(f"missing section {required}")

    epsilon, dispatch_c, engines, stats = _decode_meta(sections["meta"])
    text = sections["text"].decode("utf-8")
    parsing = _decode_parsing(sections["parsing"])
    if parsing.n != len(text):
        raise ContainerError("parsing length disagrees with the text section")
    oracle = InMemoryText(text)
    trev = _decode_tree(sections["trev"], "rev", oracle)
    tsuf = _decode_tree(sections["tsuf"], "suf", oracle)
    grid = build_grid(parsing, trev, tsuf)
    r = _Reader(sections["grid"])
    (b_stored,) = r.unpack("Q")
    stored = [int(x) for x in r.u64s(int(b_stored))]
    if stored != grid.y_of_x:
        raise ContainerError("grid points disagree with the trees")

    index = MSIndex(
        oracle=oracle,
        parsing=parsing,
        trev=trev,
        tsuf=tsuf,
        grid=grid,
        hp_rev=HeavyPathDecomp(trev),
        hp_suf=HeavyPathDecomp(tsuf),
        special=None,
        active=None,
        epsilon=epsilon,
        dispatch_c=dispatch_c,
        stats=stats,
        engines=engines if engines else ALL_ENGINES,
    )
    if "special" in sections:
        index.special = _decode_special(sections["special"], trev, tsuf)
    if "active" in sections:
        index.active = _decode_active(sections["active"], epsilon)
    return index
