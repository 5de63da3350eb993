"""Brute-force reference implementations.

Everything here answers queries by literal linear scans over plain data,
with no index to get out of sync.  The module-level functions are the
primordial oracles (pure Python, any sequence); the classes wrap numpy
arrays so differential runs with 10^5+ operations stay fast while keeping
the same scan-per-query semantics.  They ship in the library, not the
test tree, so the benchmark CLI can run its self-check mode anywhere.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Union

import numpy as np


def naive_rank(bits: Sequence[int], i: int) -> int:
    """Ones among bits[0..i] inclusive, by counting them."""
    assert 0 <= i < len(bits), i
    return sum(1 for b in bits[: i + 1] if b)


def naive_select(bits: Sequence[int], k: int) -> int:
    """Position of the (k+1)-th one, by scanning and counting."""
    assert k >= 0, k
    seen = -1
    for p, b in enumerate(bits):
        if b:
            seen += 1
            if seen == k:
                return p
    raise AssertionError(f"select({k}) on a bitmap with only {seen + 1} ones")


def naive_access(bits: Sequence[int], i: int) -> int:
    assert 0 <= i < len(bits), i
    return 1 if bits[i] else 0


def naive_flip(bits: list, i: int) -> None:
    assert 0 <= i < len(bits), i
    bits[i] ^= 1


def naive_prefix_sum(values: Sequence[int], i: int) -> int:
    """values[0] + ... + values[i], by adding them up."""
    assert 0 <= i < len(values), i
    return sum(values[: i + 1])


def naive_search(values: Sequence[int], x: int) -> tuple[int, int]:
    """Least i with prefix sum > x, as (i, sum before i); needs x < total."""
    assert x >= 0, x
    acc = 0
    for i, v in enumerate(values):
        if acc + v > x:
            return i, acc
        acc += v
    raise AssertionError(f"search({x}) beyond total {acc}")


class NaiveBitmap:
    """Boolean array bitmap; every query is a fresh linear pass."""

    def __init__(self, bits: Union[str, Iterable[int]]) -> None:
        if isinstance(bits, str):
            arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        else:
            arr = np.fromiter((int(b) for b in bits), dtype=np.uint8)
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        self.bits = arr.astype(bool)
        self.u = int(arr.size)

    @classmethod
    def zeros(cls, u: int) -> "NaiveBitmap":
        bm = cls.__new__(cls)
        bm.bits = np.zeros(u, dtype=bool)
        bm.u = u
        return bm

    @property
    def n(self) -> int:
        return int(np.count_nonzero(self.bits))

    def access(self, i: int) -> int:
        if not 0 <= i < self.u:
            raise IndexError(f"position {i} outside bitmap of {self.u} bits")
        return int(self.bits[i])

    def flip(self, i: int) -> None:
        if not 0 <= i < self.u:
            raise IndexError(f"position {i} outside bitmap of {self.u} bits")
        self.bits[i] = not self.bits[i]

    def rank(self, i: int) -> int:
        if not 0 <= i < self.u:
            raise IndexError(f"position {i} outside bitmap of {self.u} bits")
        return int(np.count_nonzero(self.bits[: i + 1]))

    def select(self, k: int) -> int:
        ones = np.flatnonzero(self.bits)
        if not 0 <= k < len(ones):
            raise IndexError(f"rank {k} outside [0, {len(ones)})")
        return int(ones[k])


class NaivePrefixSum:
    """Counter array with scan-per-query sum/search; PrefixIndex's oracle."""

    def __init__(self, values: Sequence[int]) -> None:
        self.values = np.asarray(values, dtype=np.int64).copy()
        assert self.values.min(initial=0) >= 0

    @property
    def total(self) -> int:
        return int(self.values.sum())

    @property
    def num_entries(self) -> int:
        return len(self.values)

    def sum(self, i: int) -> int:
        assert 0 <= i < len(self.values), i
        return int(self.values[: i + 1].sum())

    def update(self, i: int, sign: int) -> None:
        assert 0 <= i < len(self.values), i
        assert sign in (1, -1), sign
        self.values[i] += sign

    def search(self, x: int) -> tuple[int, int]:
        sums = np.cumsum(self.values)
        assert 0 <= x < sums[-1], (x, int(sums[-1]))
        i = int(np.argmax(sums > x))
        before = int(sums[i - 1]) if i else 0
        return i, before

    def space_bytes(self) -> int:
        return 8 * len(self.values)
