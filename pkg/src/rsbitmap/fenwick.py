"""Fenwick (binary indexed) tree baseline with the same searchable-prefix-sum
surface as PrefixIndex: sum / update / search / total / space_bytes.

Classic 1-based layout: tree[i] covers the (i & -i) entries ending at i.
Built in O(m) by pushing each slot's value to its parent once.  Search is
the standard binary descent from the highest power of two, O(log m) with
no node locality; it exists as the pointer-chasing baseline the flat
b-ary tree is measured against.
"""

from __future__ import annotations

from typing import Sequence


class FenwickTree:
    """Prefix sums over m counters, 64-bit slots, one slot per entry."""

    def __init__(self, counts: Sequence[int]) -> None:
        m = len(counts)
        assert m >= 1
        self.num_entries = m
        tree = [0] * (m + 1)
        for i in range(1, m + 1):
            v = int(counts[i - 1])
            assert v >= 0, "counters must be non-negative"
            tree[i] += v
            j = i + (i & -i)
            if j <= m:
                tree[j] += tree[i]
        self.tree = tree
        self.total = sum(int(v) for v in counts)
        self._top = 1 << (m.bit_length() - 1) if m else 0

    def sum(self, i: int) -> int:
        """Inclusive prefix sum A[0] + ... + A[i]."""
        assert 0 <= i < self.num_entries, i
        acc = 0
        j = i + 1
        while j:
            acc += self.tree[j]
            j -= j & -j
        return acc

    def update(self, i: int, sign: int) -> None:
        """A[i] += sign, sign in {+1, -1}."""
        assert 0 <= i < self.num_entries, i
        assert sign in (1, -1), sign
        j = i + 1
        while j <= self.num_entries:
            self.tree[j] += sign
            j += j & -j
        self.total += sign

    def search(self, x: int) -> tuple[int, int]:
        """Least i with sum(i) > x; returns (i, sum before entry i)."""
        assert 0 <= x < self.total, (x, self.total)
        pos = 0
        rem = x
        pw = self._top
        while pw:
            nxt = pos + pw
            if nxt <= self.num_entries and self.tree[nxt] <= rem:
                rem -= self.tree[nxt]
                pos = nxt
            pw >>= 1
        return pos, x - rem

    def space_bytes(self) -> int:
        """Bytes at the declared slot width (64-bit), including slot 0."""
        return 8 * (self.num_entries + 1)
