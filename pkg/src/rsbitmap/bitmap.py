"""Mutable bitmap with constant-ish time rank, select, access and flip.

The bitmap stores raw bits in 64-bit words, grouped into blocks of
64/256/512 bits.  A searchable prefix-sum index (segment tree or Fenwick
baseline) maintains the per-block one-counts, so:

    rank(i)   = index.sum(block before i's block) + in-block rank
    select(k) = index.search(k) to find the block, + in-block select
    flip(i)   = toggle the bit, index.update(block, +-1)

rank(i) counts set bits in positions 0..i inclusive.  select(k) returns
the position of the (k+1)-th set bit (k = 0 is the first one), so
rank(select(k)) == k + 1.

The final block is physically padded with zero bits when u is not a
multiple of the block size; range checks keep every operation inside
[0, u), so the padding can never change and counts stay exact.
"""

from __future__ import annotations

import struct
from typing import Iterable, Sequence, Union

import numpy as np

from .blocks import (
    RankStrategy,
    SUPPORTED_BLOCK_BITS,
    SelectStrategy,
    compile_rank,
    compile_select,
    recommended_strategies,
)
from .fenwick import FenwickTree
from .segtree import MAX_ENTRIES, PrefixIndex
from .words import lanes_available

INDEX_CONFIGS = ("scalar", "narrow", "wide", "fenwick")

_MAGIC = b"MRSB"
_VERSION = 1
_HEADER = struct.Struct("<4sHQH8s")

# Stable ids for the serialized config byte block.
_POP_IDS = ("builtin", "broadword", "vector")
_PREFIX_IDS = ("loop", "unrolled", "lanes")
_SEARCH_IDS = ("loop", "lanes")
_WORD_IDS = ("pdep", "bw-sdsl", "bw-succinct")


def default_index_config() -> str:
    """Widest lane config the runtime supports (wide > narrow > scalar)."""
    return "wide" if lanes_available() else "narrow"


def _pack_bits(bits: Union[str, Iterable[int]]) -> tuple[np.ndarray, int]:
    """Turn a '0'/'1' string or 0/1 iterable into little-endian words."""
    if isinstance(bits, str):
        arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        arr = np.fromiter((int(b) for b in bits), dtype=np.uint8)
    if arr.size and arr.max() > 1:
        raise ValueError("bits must be 0 or 1")
    u = int(arr.size)
    packed = np.packbits(arr, bitorder="little").tobytes()
    packed += b"\0" * (-len(packed) % 8)
    return np.frombuffer(packed, dtype="<u8"), u


class MutableBitmap:
    """u-bit bitmap supporting access/flip/rank/select.

    Construct via `zeros` or `from_bits`.  `block_bits` picks the block
    size B in {64, 256, 512}; `index` picks the prefix-sum index over the
    m = ceil(u/B) per-block counts ("scalar", "narrow", "wide" segment
    trees or the "fenwick" baseline); `rank_strategy`/`select_strategy`
    pick the in-block kernels (tuned defaults when omitted).  All
    configuration is fixed at construction so the hot paths stay
    monomorphic.
    """

    def __init__(
        self,
        words: Sequence[int],
        u: int,
        block_bits: int = 256,
        index: Union[str, None] = None,
        rank_strategy: Union[RankStrategy, None] = None,
        select_strategy: Union[SelectStrategy, None] = None,
    ) -> None:
        if block_bits not in SUPPORTED_BLOCK_BITS:
            raise ValueError(f"unsupported block size {block_bits}")
        if u < 1:
            raise ValueError("universe size must be at least 1")
        if u > MAX_ENTRIES * block_bits:
            raise ValueError(
                f"u={u} exceeds capacity {MAX_ENTRIES} * {block_bits} blocks"
            )
        index = default_index_config() if index is None else index
        if index not in INDEX_CONFIGS:
            raise ValueError(f"unknown index config {index!r}")
        rec_rank, rec_select = recommended_strategies(block_bits, u)
        self.u = u
        self.block_bits = block_bits
        self.index_config = index
        self.rank_strategy = rec_rank if rank_strategy is None else rank_strategy
        self.select_strategy = rec_select if select_strategy is None else select_strategy

        wpb = block_bits // 64
        m = -(-u // block_bits)
        self.num_blocks = m
        self.words = list(words) + [0] * (m * wpb - len(words))
        assert len(self.words) == m * wpb, "more words than the universe holds"
        last = (u - 1) >> 6
        if u & 63:
            assert self.words[last] >> (u & 63) == 0, "padding bits beyond u must be zero"
        assert all(w == 0 for w in self.words[last + 1 :]), "padding bits beyond u must be zero"

        counts = self._block_counts()
        if index == "fenwick":
            self.index: Union[PrefixIndex, FenwickTree] = FenwickTree(counts)
        else:
            self.index = PrefixIndex(np.array(counts, dtype=np.int64), config=index)
        self.n = self.index.total
        self._words_per_block = wpb
        self._rank_block = compile_rank(self.rank_strategy)
        self._select_block = compile_select(self.select_strategy)

    def _block_counts(self) -> list[int]:
        wpb = self.block_bits // 64
        return [
            sum(w.bit_count() for w in self.words[b * wpb : (b + 1) * wpb])
            for b in range(self.num_blocks)
        ]

    @classmethod
    def zeros(
        cls,
        u: int,
        block_bits: int = 256,
        index: Union[str, None] = None,
        rank_strategy: Union[RankStrategy, None] = None,
        select_strategy: Union[SelectStrategy, None] = None,
    ) -> "MutableBitmap":
        """All-zero bitmap of u bits."""
        return cls([], u, block_bits, index, rank_strategy, select_strategy)

    @classmethod
    def from_bits(
        cls,
        bits: Union[str, Iterable[int]],
        block_bits: int = 256,
        index: Union[str, None] = None,
        rank_strategy: Union[RankStrategy, None] = None,
        select_strategy: Union[SelectStrategy, None] = None,
    ) -> "MutableBitmap":
        """Bitmap from a '0'/'1' string or iterable of 0/1, index built in bulk."""
        words, u = _pack_bits(bits)
        return cls([int(w) for w in words], u, block_bits, index, rank_strategy, select_strategy)

    def access(self, i: int) -> int:
        """Value of bit i."""
        if not 0 <= i < self.u:
            raise IndexError(f"position {i} outside bitmap of {self.u} bits")
        return (self.words[i >> 6] >> (i & 63)) & 1

    def flip(self, i: int) -> None:
        """Toggle bit i, keeping counts and the index in step."""
        if not 0 <= i < self.u:
            raise IndexError(f"position {i} outside bitmap of {self.u} bits")
        j = i >> 6
        self.words[j] ^= 1 << (i & 63)
        sign = 1 if (self.words[j] >> (i & 63)) & 1 else -1
        self.index.update(i // self.block_bits, sign)
        self.n += sign

    def rank(self, i: int) -> int:
        """Number of set bits among positions 0..i inclusive."""
        if not 0 <= i < self.u:
            raise IndexError(f"position {i} outside bitmap of {self.u} bits")
        blk, off = divmod(i, self.block_bits)
        wpb = self._words_per_block
        base = self.index.sum(blk - 1) if blk else 0
        return base + self._rank_block(self.words[blk * wpb : (blk + 1) * wpb], off)

    def select(self, k: int) -> int:
        """Position of the (k+1)-th set bit; requires 0 <= k < n."""
        if not 0 <= k < self.n:
            raise IndexError(f"rank {k} outside [0, {self.n})")
        blk, before = self.index.search(k)
        wpb = self._words_per_block
        words = self.words[blk * wpb : (blk + 1) * wpb]
        return blk * self.block_bits + self._select_block(words, k - before)

    def space_report(self) -> dict:
        """Bitmap bytes, index bytes, and index overhead as a percentage."""
        bitmap_bytes = (-(-self.u // 64)) * 8
        index_bytes = self.index.space_bytes()
        return {
            "bitmap_bytes": bitmap_bytes,
            "index_bytes": index_bytes,
            "overhead_percent": 100.0 * index_bytes / bitmap_bytes,
        }

    @staticmethod
    def planned_space(u: int, block_bits: int = 256, index: Union[str, None] = None) -> dict:
        """space_report figures for a hypothetical bitmap, nothing allocated.

        Lets callers quote overhead for sizes (say u = 2^32) that would be
        slow to materialize.
        """
        from .segtree import planned_bytes

        if block_bits not in SUPPORTED_BLOCK_BITS:
            raise ValueError(f"unsupported block size {block_bits}")
        if not 1 <= u <= MAX_ENTRIES * block_bits:
            raise ValueError(f"u={u} outside capacity for block size {block_bits}")
        index = default_index_config() if index is None else index
        m = -(-u // block_bits)
        bitmap_bytes = (-(-u // 64)) * 8
        index_bytes = 8 * (m + 1) if index == "fenwick" else planned_bytes(m, index)
        return {
            "bitmap_bytes": bitmap_bytes,
            "index_bytes": index_bytes,
            "overhead_percent": 100.0 * index_bytes / bitmap_bytes,
        }

    def serialize(self) -> bytes:
        """Binary image: magic, version, u, B, config bytes, raw words.

        Only the ceil(u/64) meaningful words are stored (little-endian);
        the index is rebuilt on load from the stored configuration.
        """
        config = bytes(
            [
                INDEX_CONFIGS.index(self.index_config),
                _POP_IDS.index(self.rank_strategy.popcount),
                _PREFIX_IDS.index(self.rank_strategy.prefix),
                _POP_IDS.index(self.select_strategy.popcount),
                _SEARCH_IDS.index(self.select_strategy.search),
                _WORD_IDS.index(self.select_strategy.word),
                0,
                0,
            ]
        )
        header = _HEADER.pack(_MAGIC, _VERSION, self.u, self.block_bits, config)
        n_words = -(-self.u // 64)
        body = np.array(self.words[:n_words], dtype=np.uint64).astype("<u8").tobytes()
        return header + body

    @classmethod
    def deserialize(cls, data: bytes) -> "MutableBitmap":
        """Rebuild a bitmap serialized by `serialize`; format errors raise."""
        if len(data) < _HEADER.size:
            raise ValueError("truncated header")
        magic, version, u, block_bits, config = _HEADER.unpack_from(data)
        if magic != _MAGIC:
            raise ValueError(f"bad magic {magic!r}")
        if version != _VERSION:
            raise ValueError(f"unsupported version {version}")
        n_words = -(-u // 64)
        if len(data) != _HEADER.size + 8 * n_words:
            raise ValueError("payload length does not match header")
        try:
            index = INDEX_CONFIGS[config[0]]
            rank_strategy = RankStrategy(_POP_IDS[config[1]], _PREFIX_IDS[config[2]])
            select_strategy = SelectStrategy(
                _POP_IDS[config[3]], _SEARCH_IDS[config[4]], _WORD_IDS[config[5]]
            )
        except IndexError as exc:
            raise ValueError("bad config bytes") from exc
        words = np.frombuffer(data, dtype="<u8", offset=_HEADER.size).tolist()
        if u % 64 and words and words[-1] >> (u % 64):
            raise ValueError("padding bits beyond u must be zero")
        return cls(words, u, block_bits, index, rank_strategy, select_strategy)
