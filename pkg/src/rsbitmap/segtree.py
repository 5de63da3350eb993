"""Flat b-ary segment tree over an array of small counters.

The index maintains an implicit array A[0..m) of non-negative counts
(per-block one-counts, in the bitmap's case) and answers

    sum(i)      -> A[0] + ... + A[i]
    update(i,s) -> A[i] += s, s in {+1, -1}
    search(x)   -> (i, before) with before = sum(A[0..i-1]) <= x < sum(A[0..i])

Levels are arrays of two-level prefix-sum nodes (see nodes.py), laid out
root first.  There are no pointers: the child of key k of node n at a
level with fanout b is node n*b + k of the next level.  The height is
the minimum from a fixed ladder of layouts where every level's segment
rows fit the target lane width, and the leaf level always uses the
widest-fanout (most space-efficient) layout:

    narrow lanes: 128 | 64,128 | 64,64,128 | 32,64,64,128   (up to 2^24)
    wide lanes:   512 | 256,512 | 128,256,512               (up to 2^24)

Partial trees simply allocate the ceiling number of nodes per level and
leave the tail keys zero; searches can never land there because padding
keys repeat the preceding prefix sum and search wants strictly-greater.

Configs: "narrow" and "wide" pick the lane ladder above with the numpy
lane backend; "scalar" uses the narrow ladder with sequential pure-Python
nodes.
"""

from __future__ import annotations

import numpy as np

from .nodes import LaneLevel, NARROW_LAYOUTS, NodeSpec, ScalarLevel, WIDE_LAYOUTS

MAX_ENTRIES = 1 << 24

TREE_CONFIGS = ("scalar", "narrow", "wide")

_NARROW_LADDER = ((128,), (64, 128), (64, 64, 128), (32, 64, 64, 128))
_WIDE_LADDER = ((512,), (256, 512), (128, 256, 512))


def _ladder(config: str) -> tuple[tuple[tuple[int, ...], ...], dict[int, NodeSpec]]:
    if config in ("narrow", "scalar"):
        return _NARROW_LADDER, NARROW_LAYOUTS
    if config == "wide":
        return _WIDE_LADDER, WIDE_LAYOUTS
    raise ValueError(f"unknown tree config {config!r}")


def plan_levels(num_entries: int, config: str) -> list[tuple[NodeSpec, int]]:
    """Pick the minimum-height layout stack covering num_entries.

    Returns (spec, node_count) per level, root first, without allocating
    anything, so space can be quoted for any m up to 2^24.
    """
    if not 1 <= num_entries <= MAX_ENTRIES:
        raise ValueError(f"entry count {num_entries} outside [1, {MAX_ENTRIES}]")
    ladder, layouts = _ladder(config)
    for fanouts in ladder:
        capacity = 1
        for b in fanouts:
            capacity *= b
        if num_entries <= capacity:
            break
    else:
        raise AssertionError("ladder tops out below MAX_ENTRIES")
    counts = []
    below = num_entries
    for b in reversed(fanouts):
        below = -(-below // b)
        counts.append(below)
    assert counts[-1] == 1, "root level must be a single node"
    return [(layouts[b], c) for b, c in zip(fanouts, reversed(counts))]


def planned_bytes(num_entries: int, config: str) -> int:
    """Index size in bytes for num_entries counters, from the layout alone."""
    return sum(spec.node_bytes * count for spec, count in plan_levels(num_entries, config))


class PrefixIndex:
    """Searchable prefix sums over m counters with O(1)-ish +-1 updates."""

    def __init__(self, counts: np.ndarray, config: str = "narrow") -> None:
        counts = np.asarray(counts, dtype=np.int64)
        assert counts.ndim == 1
        assert counts.min(initial=0) >= 0, "counters must be non-negative"
        self.config = config
        self.num_entries = len(counts)
        plan = plan_levels(self.num_entries, config)
        level_cls = ScalarLevel if config == "scalar" else LaneLevel
        levels: list = []
        entries = counts
        for spec, expect_count in reversed(plan):
            level, entries = level_cls.build(spec, entries)
            assert level.num_nodes == expect_count, (spec.name, level.num_nodes, expect_count)
            levels.append(level)
        levels.reverse()
        self.levels = levels
        self.total = int(entries[0])
        # Entries covered by one key at each level: the product of the
        # fanouts strictly below it.
        epk = [1]
        for level in reversed(levels[1:]):
            epk.append(epk[-1] * level.spec.fanout)
        self._entries_per_key = list(reversed(epk))

    def sum(self, i: int) -> int:
        """Inclusive prefix sum A[0] + ... + A[i]."""
        assert 0 <= i < self.num_entries, i
        acc = 0
        last = len(self.levels) - 1
        for depth, level in enumerate(self.levels):
            idx = i // self._entries_per_key[depth]
            n, k = divmod(idx, level.spec.fanout)
            if depth == last:
                acc += level.sum_inclusive(n, k)
            else:
                acc += level.prefix_exclusive(n, k)
        return acc

    def update(self, i: int, sign: int) -> None:
        """A[i] += sign, sign in {+1, -1}.  The caller keeps A[i] >= 0."""
        assert 0 <= i < self.num_entries, i
        assert sign in (1, -1), sign
        for depth, level in enumerate(self.levels):
            idx = i // self._entries_per_key[depth]
            n, k = divmod(idx, level.spec.fanout)
            level.update(n, k, sign)
        self.total += sign

    def search(self, x: int) -> tuple[int, int]:
        """Least i with sum(i) > x; returns (i, sum before entry i).

        Requires 0 <= x < total, so a valid i always exists.
        """
        assert 0 <= x < self.total, (x, self.total)
        n = 0
        before_total = 0
        for depth, level in enumerate(self.levels):
            k, before = level.search(n, x)
            x -= before
            before_total += before
            n = n * level.spec.fanout + k
        return n, before_total

    def space_bytes(self) -> int:
        """Bytes of index storage, from the declared node layout widths."""
        return sum(level.level_bytes() for level in self.levels)