"""Single-word bit kernels: popcount, masking, select-in-word, counter prefix sums.

Everything here operates on 64-bit words represented as plain Python ints
(LSB-first bit numbering: bit k of word j is bitmap position j*64 + k) or on
small arrays of per-word counters.  Each operation comes in several
interchangeable backends that must return identical results; the scalar
variants are the reference, the others mirror hardware idioms (SWAR
broadword tricks, nibble-LUT vector popcount, lane-parallel prefix sums).
"""

from __future__ import annotations

from typing import Sequence

M64 = (1 << 64) - 1

_ONES_4 = 0x1111111111111111
_ONES_8 = 0x0101010101010101
_MSBS_8 = 0x8080808080808080

# popcount of every byte value, used by the nibble/byte LUT kernels
_BYTE_COUNTS = bytes(bin(b).count("1") for b in range(256))
_NIBBLE_COUNTS = _BYTE_COUNTS[:16]

# _SELECT_IN_BYTE[(k << 8) | b] = position of the (k+1)-th set bit of byte b
# (0x7F where k >= popcount(b); never read on legal inputs).
def _build_select_in_byte() -> bytes:
    table = bytearray(8 * 256)
    for b in range(256):
        k = 0
        for pos in range(8):
            if b >> pos & 1:
                table[(k << 8) | b] = pos
                k += 1
        for rest in range(k, 8):
            table[(rest << 8) | b] = 0x7F
    return bytes(table)


_SELECT_IN_BYTE = _build_select_in_byte()

POPCOUNT_BACKENDS = ("builtin", "broadword", "vector")
SELECT_WORD_BACKENDS = ("pdep", "bw-sdsl", "bw-succinct")
PREFIX_STRATEGIES = ("loop", "unrolled", "lanes")
SEARCH_STRATEGIES = ("loop", "lanes")


def lanes_available() -> bool:
    """Whether the lane-parallel kernel backends may be selected.

    This build always ships the lane emulation, so the answer is True; the
    hook exists so strategy selection reads as a capability check.
    """
    return True


def popcount_builtin(w: int) -> int:
    """Set-bit count via the native bit_count instruction."""
    return w.bit_count()


def popcount_broadword(w: int) -> int:
    """Set-bit count via SWAR sideways addition (no native popcount)."""
    w = w - ((w >> 1) & 0x5555555555555555)
    w = (w & 0x3333333333333333) + ((w >> 2) & 0x3333333333333333)
    w = (w + (w >> 4)) & 0x0F0F0F0F0F0F0F0F
    return ((w * _ONES_8) & M64) >> 56


def popcount_vector(w: int) -> int:
    """Set-bit count via nibble table lookups, emulating the shuffle-based
    vector popcount (16 nibble lanes per word)."""
    t = _NIBBLE_COUNTS
    total = 0
    while w:
        total += t[w & 0xF]
        w >>= 4
    return total


_POPCOUNT_FNS = {
    "builtin": popcount_builtin,
    "broadword": popcount_broadword,
    "vector": popcount_vector,
}


def popcount_word(w: int, backend: str = "builtin") -> int:
    """Number of set bits in w, via the named backend."""
    return _POPCOUNT_FNS[backend](w)


def mask_low(w: int, keep: int) -> int:
    """Retain only the `keep` least-significant bits of w, 1 <= keep <= 64."""
    assert 1 <= keep <= 64, keep
    return w & (M64 >> (64 - keep))


def pdep64(value: int, mask: int) -> int:
    """Parallel bits deposit: scatter the low bits of value to the set
    positions of mask, low to high."""
    out = 0
    bit = 1
    while mask:
        if value & bit:
            out |= mask & -mask
        mask &= mask - 1
        bit <<= 1
    return out


def select_word_pdep(w: int, k: int) -> int:
    """Position of the (k+1)-th set bit: tzcnt(pdep(1 << k, w)).

    Clearing the k lowest set bits leaves pdep(1 << k, w)'s target as the
    lowest survivor, so the deposit itself is skipped.
    """
    for _ in range(k):
        w &= w - 1
    return (w & -w).bit_length() - 1


def _byte_sums(w: int) -> int:
    # Cumulative per-byte popcounts, one inclusive sum per byte lane.
    s = w - ((w >> 1) & 0x5555555555555555)
    s = (s & 0x3333333333333333) + ((s >> 2) & 0x3333333333333333)
    s = (s + (s >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (s * _ONES_8) & M64


def select_word_bw_succinct(w: int, k: int) -> int:
    """Broadword select: locate the byte by counting lanes whose cumulative
    popcount is <= k (LEQ mask trick), then finish with the in-byte table."""
    sums = _byte_sums(w)
    k_8 = k * _ONES_8
    # Lane arithmetic: (k + 0x80) - sum >= 0x80 iff sum <= k, and every lane
    # stays positive (k <= 63, sum <= 64), so no borrow crosses lanes.
    leq = ((k_8 | _MSBS_8) - sums) & _MSBS_8
    place = popcount_builtin(leq) * 8
    byte_rank = k - (((sums << 8) & M64) >> place & 0xFF)
    return place + _SELECT_IN_BYTE[(byte_rank << 8) | (w >> place & 0xFF)]


def select_word_bw_sdsl(w: int, k: int) -> int:
    """Broadword select: locate the byte by adding a per-rank overflow
    constant and taking ctz of the carry mask, then the in-byte table."""
    sums = _byte_sums(w)
    # Adding (0x80 - (k+1)) to each lane overflows into the MSB exactly in
    # lanes whose cumulative count exceeds k.
    overflow = ((0x80 - (k + 1)) * _ONES_8) & M64
    carries = (sums + overflow) & _MSBS_8
    byte_nr = ((carries & -carries).bit_length() - 1) >> 3
    before = (sums << 8) >> (byte_nr << 3) & 0xFF
    return (byte_nr << 3) + _SELECT_IN_BYTE[((k - before) << 8) | (w >> (byte_nr << 3) & 0xFF)]


_SELECT_WORD_FNS = {
    "pdep": select_word_pdep,
    "bw-sdsl": select_word_bw_sdsl,
    "bw-succinct": select_word_bw_succinct,
}


def select_in_word(w: int, k: int, backend: str = "pdep") -> int:
    """Position of the (k+1)-th set bit of w; requires k < popcount(w)."""
    return _SELECT_WORD_FNS[backend](w, k)


def prefix_sum_loop(counts: Sequence[int]) -> list[int]:
    """Inclusive prefix sums via a running-total loop."""
    out = []
    acc = 0
    for c in counts:
        acc += c
        out.append(acc)
    return out


def prefix_sum_unrolled(counts: Sequence[int]) -> list[int]:
    """Inclusive prefix sums via the branch-free in-place recurrence
    c[k] += c[k-1]."""
    out = list(counts)
    for k in range(1, len(out)):
        out[k] += out[k - 1]
    return out


def prefix_sum_lanes(counts: Sequence[int]) -> list[int]:
    """Inclusive prefix sums via doubling-stride lane shifts (parallel scan:
    each round adds the vector shifted up by the stride, zero-filled)."""
    out = list(counts)
    n = len(out)
    d = 1
    while d < n:
        out = [out[t] + (out[t - d] if t >= d else 0) for t in range(n)]
        d <<= 1
    return out


_PREFIX_FNS = {
    "loop": prefix_sum_loop,
    "unrolled": prefix_sum_unrolled,
    "lanes": prefix_sum_lanes,
}


def prefix_sum_counters(counts: Sequence[int], strategy: str = "loop") -> list[int]:
    """Inclusive prefix sums of a counter array, via the named strategy."""
    return _PREFIX_FNS[strategy](counts)


def first_exceeding_loop(sums: Sequence[int], x: int) -> int:
    """Smallest j with sums[j] > x, by early-exit scan; requires x < sums[-1]."""
    for j, v in enumerate(sums):
        if v > x:
            return j
    raise AssertionError(f"first_exceeding: {x} >= total {sums[-1]}")


def first_exceeding_lanes(sums: Sequence[int], x: int) -> int:
    """Smallest j with sums[j] > x, emulating compare-all-lanes + movemask +
    ctz (no early exit)."""
    mask = 0
    for j, v in enumerate(sums):
        if v > x:
            mask |= 1 << j
    assert mask, f"first_exceeding: {x} >= total {sums[-1]}"
    return (mask & -mask).bit_length() - 1


_SEARCH_FNS = {"loop": first_exceeding_loop, "lanes": first_exceeding_lanes}


def first_exceeding(sums: Sequence[int], x: int, backend: str = "loop") -> int:
    """Smallest index whose prefix-summed counter strictly exceeds x."""
    return _SEARCH_FNS[backend](sums, x)
