"""Rank and select inside one block of 64/256/512 bits, with no extra space.

A block is B/64 consecutive words.  Rank runs in two steps (per-word
popcount, then prefix-sum of the counters); select in three (popcount,
prefix-sum + search for the target word, then select inside that word).
Every step has interchangeable backends, named with the same spellings the
benchmark CLI uses:

    popcount:  builtin | broadword | vector
    prefix:    loop | unrolled | lanes
    search:    loop | lanes
    in-word:   pdep | bw-sdsl | bw-succinct

All combinations return identical results; they differ only in which words
they touch (the `loop` variants stop early, the rest are branch-free and
read the whole block).  Rank is inclusive of position i: rank(b, i) counts
the set bits among positions 0..i.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from . import words as _w
from .words import (
    M64,
    POPCOUNT_BACKENDS,
    PREFIX_STRATEGIES,
    SEARCH_STRATEGIES,
    SELECT_WORD_BACKENDS,
    lanes_available,
    mask_low,
)

SUPPORTED_BLOCK_BITS = (64, 256, 512)


@dataclass(frozen=True)
class RankStrategy:
    """Backend choice for in-block rank: (popcount, prefix-sum)."""

    popcount: str = "builtin"
    prefix: str = "unrolled"

    def __post_init__(self) -> None:
        if self.popcount not in POPCOUNT_BACKENDS:
            raise ValueError(f"unknown popcount backend {self.popcount!r}")
        if self.prefix not in PREFIX_STRATEGIES:
            raise ValueError(f"unknown prefix strategy {self.prefix!r}")


@dataclass(frozen=True)
class SelectStrategy:
    """Backend choice for in-block select: (popcount, search, in-word)."""

    popcount: str = "builtin"
    search: str = "loop"
    word: str = "pdep"

    def __post_init__(self) -> None:
        if self.popcount not in POPCOUNT_BACKENDS:
            raise ValueError(f"unknown popcount backend {self.popcount!r}")
        if self.search not in SEARCH_STRATEGIES:
            raise ValueError(f"unknown search strategy {self.search!r}")
        if self.word not in SELECT_WORD_BACKENDS:
            raise ValueError(f"unknown select-in-word backend {self.word!r}")


ALL_RANK_STRATEGIES = tuple(
    RankStrategy(p, s) for p in POPCOUNT_BACKENDS for s in PREFIX_STRATEGIES
)
ALL_SELECT_STRATEGIES = tuple(
    SelectStrategy(p, s, w)
    for p in POPCOUNT_BACKENDS
    for s in SEARCH_STRATEGIES
    for w in SELECT_WORD_BACKENDS
)


@dataclass
class Block:
    """An immutable view of one block: B/64 words, LSB-first bit order."""

    words: Sequence[int]
    block_bits: int

    def __post_init__(self) -> None:
        if self.block_bits not in SUPPORTED_BLOCK_BITS:
            raise ValueError(f"unsupported block size {self.block_bits}")
        if len(self.words) != self.block_bits // 64:
            raise ValueError(
                f"block of {self.block_bits} bits needs "
                f"{self.block_bits // 64} words, got {len(self.words)}"
            )


@lru_cache(maxsize=None)
def compile_rank(strategy: RankStrategy) -> Callable[[Sequence[int], int], int]:
    """Bind a rank strategy to a callable rank(words, i) -> count.

    Binding happens once per strategy so per-query dispatch stays
    monomorphic.
    """
    pop = _w._POPCOUNT_FNS[strategy.popcount]

    if strategy.prefix == "loop":

        def rank(words: Sequence[int], i: int) -> int:
            # Early-exit variant: words after floor(i/64) are never read.
            j = i >> 6
            acc = 0
            for t in range(j):
                acc += pop(words[t])
            return acc + pop(words[j] & (M64 >> (63 - (i & 63))))

        return rank

    prefix = _w._PREFIX_FNS[strategy.prefix]

    def rank(words: Sequence[int], i: int) -> int:
        j = i >> 6
        counts = [pop(w) for w in words]
        counts[j] = pop(words[j] & (M64 >> (63 - (i & 63))))
        return prefix(counts)[j]

    return rank


@lru_cache(maxsize=None)
def compile_select(strategy: SelectStrategy) -> Callable[[Sequence[int], int], int]:
    """Bind a select strategy to a callable select(words, k) -> position."""
    pop = _w._POPCOUNT_FNS[strategy.popcount]
    sel64 = _w._SELECT_WORD_FNS[strategy.word]

    if strategy.search == "loop":

        def select(words: Sequence[int], k: int) -> int:
            # Popcount is fused into the searching loop; later words are
            # never read.
            acc = 0
            for j, w in enumerate(words):
                c = pop(w)
                if acc + c > k:
                    return (j << 6) + sel64(w, k - acc)
                acc += c
            raise AssertionError(f"select: rank {k} >= ones in block {acc}")

        return select

    def select(words: Sequence[int], k: int) -> int:
        counts = [pop(w) for w in words]
        sums = _w.prefix_sum_lanes(counts)
        j = _w.first_exceeding_lanes(sums, k)
        before = sums[j - 1] if j else 0
        return (j << 6) + sel64(words[j], k - before)

    return select


def block_rank(block: Block, i: int, strategy: RankStrategy = RankStrategy()) -> int:
    """Set bits among block positions 0..i inclusive; 0 <= i < block_bits."""
    assert 0 <= i < block.block_bits, i
    return compile_rank(strategy)(block.words, i)


def block_select(block: Block, k: int, strategy: SelectStrategy = SelectStrategy()) -> int:
    """Position of the (k+1)-th set bit of the block; k < block_popcount."""
    return compile_select(strategy)(block.words, k)


def block_popcount(block: Block) -> int:
    """Total set bits in the block."""
    return sum(w.bit_count() for w in block.words)


def recommended_strategies(block_bits: int, universe_bits: int) -> tuple[RankStrategy, SelectStrategy]:
    """Tuned default kernels for a bitmap of `universe_bits` bits.

    Rank favours the branch-free unrolled prefix until the bitmap outgrows
    cache (2^25 bits), where the early-exit loop's fewer memory touches win.
    Select pairs the lane kernels with pdep when lane backends are present,
    falling back to the fused loop otherwise.  One-word blocks collapse to
    a single mask+popcount / select-in-word, expressed as the loop
    strategies.
    """
    if block_bits not in SUPPORTED_BLOCK_BITS:
        raise ValueError(f"unsupported block size {block_bits}")
    if block_bits == 64:
        return RankStrategy("builtin", "loop"), SelectStrategy("builtin", "loop", "pdep")
    rank = RankStrategy("builtin", "unrolled" if universe_bits <= 1 << 25 else "loop")
    if lanes_available():
        select = SelectStrategy("vector", "lanes", "pdep")
    else:
        select = SelectStrategy("builtin", "loop", "pdep")
    return rank, select
