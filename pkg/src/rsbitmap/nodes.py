"""Two-level prefix-sum nodes: the building block of the searchable index.

A node stores b small counters in two levels:

  * keys[0..b): the counters, grouped into S segments of L lanes each
    (b = S*L).  Within a segment, keys hold the running (inclusive)
    prefix sums of the segment's counters.
  * summary[0..S): summary[0] = 0 and summary[s] = total of segments
    0..s-1, so sums never cross a segment boundary at query time.

That gives, for key index i with segment j = i div L:

    sum(0..i)            = summary[j] + keys[i]
    sum before key i     = summary[j] + (keys[i-1] if i mod L else 0)

Updates touch one summary row and one segment row, both taken from small
precomputed tables (one row per possible position, zeros before the
position and +-1 after), so an update is two lane-wide adds.  Search
finds the first summary lane exceeding the target, then the first key
lane in that segment exceeding the remainder.

Two interchangeable backends implement the same node contract:

  * LaneLevel: numpy arrays, one row per node.  Unsigned lane arithmetic
    with wraparound stands in for SIMD lane adds (adding the all-ones
    pattern is a lane-wise -1).
  * ScalarLevel: plain Python lists with sequential loops, the
    no-lane-instructions reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGNS = (1, -1)


@dataclass(frozen=True)
class NodeSpec:
    """Shape and storage widths of one node layout."""

    name: str
    fanout: int
    segments: int
    summary_bits: int
    key_bits: int

    def __post_init__(self) -> None:
        assert self.fanout % self.segments == 0, (self.fanout, self.segments)
        assert self.summary_bits in (16, 32, 64) and self.key_bits in (16, 32, 64)

    @property
    def seg_len(self) -> int:
        return self.fanout // self.segments

    @property
    def node_bytes(self) -> int:
        return self.segments * self.summary_bits // 8 + self.fanout * self.key_bits // 8

    @property
    def summary_dtype(self) -> np.dtype:
        return np.dtype(f"uint{self.summary_bits}")

    @property
    def key_dtype(self) -> np.dtype:
        return np.dtype(f"uint{self.key_bits}")


# Layouts sized for 256-bit lanes: segment rows fit one register of the
# key width, summaries one register of the summary width.
NARROW_LAYOUTS = {
    32: NodeSpec("narrow32", fanout=32, segments=4, summary_bits=64, key_bits=32),
    64: NodeSpec("narrow64", fanout=64, segments=8, summary_bits=32, key_bits=32),
    128: NodeSpec("narrow128", fanout=128, segments=8, summary_bits=32, key_bits=16),
}

# Layouts sized for 512-bit lanes.
WIDE_LAYOUTS = {
    128: NodeSpec("wide128", fanout=128, segments=8, summary_bits=64, key_bits=32),
    256: NodeSpec("wide256", fanout=256, segments=16, summary_bits=32, key_bits=32),
    512: NodeSpec("wide512", fanout=512, segments=16, summary_bits=32, key_bits=16),
}


def _triangular(length: int, sign: int, dtype: np.dtype, strict: bool) -> np.ndarray:
    # Update tables are triangular matrices: the summary table's row j is
    # zero through lane j and sign afterwards (strictly upper), the segment
    # table's row r is zero before lane r and sign from it on (upper).
    # Unsigned wraparound encodes sign = -1 as the all-ones lane pattern.
    table = np.triu(np.full((length, length), sign, dtype=np.int64), k=1 if strict else 0)
    with np.errstate(over="ignore"):
        return table.astype(dtype)


def summary_update_table(spec: NodeSpec, sign: int) -> np.ndarray:
    """Row j adds `sign` to every summary lane s > j (wraparound encodes -1)."""
    assert sign in SIGNS
    return _triangular(spec.segments, sign, spec.summary_dtype, strict=True)


def segment_update_table(spec: NodeSpec, sign: int) -> np.ndarray:
    """Row r adds `sign` to every key lane t >= r within the segment."""
    assert sign in SIGNS
    return _triangular(spec.seg_len, sign, spec.key_dtype, strict=False)


def _build_arrays(spec: NodeSpec, entries: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pack per-key values into (summary, keys, per-node totals), int64."""
    b = spec.fanout
    num_nodes = max(1, -(-len(entries) // b))
    padded = np.zeros(num_nodes * b, dtype=np.int64)
    padded[: len(entries)] = entries
    grid = padded.reshape(num_nodes, spec.segments, spec.seg_len)
    seg_totals = grid.sum(axis=2)
    keys = grid.cumsum(axis=2).reshape(num_nodes, b)
    summary = np.zeros((num_nodes, spec.segments), dtype=np.int64)
    summary[:, 1:] = seg_totals.cumsum(axis=1)[:, :-1]
    assert keys.max(initial=0) < 1 << spec.key_bits, "key counter overflows its lane"
    assert summary.max(initial=0) < 1 << spec.summary_bits, "summary overflows its lane"
    return summary, keys, seg_totals.sum(axis=1)


class LaneLevel:
    """One tree level as numpy lane arrays, one row per node."""

    def __init__(self, spec: NodeSpec, summary: np.ndarray, keys: np.ndarray) -> None:
        self.spec = spec
        self.summary = summary
        self.keys = keys
        self.num_nodes = len(summary)
        self._t_summary = {s: summary_update_table(spec, s) for s in SIGNS}
        self._t_segment = {s: segment_update_table(spec, s) for s in SIGNS}

    @classmethod
    def build(cls, spec: NodeSpec, entries: np.ndarray) -> tuple["LaneLevel", np.ndarray]:
        summary, keys, totals = _build_arrays(spec, entries)
        return cls(spec, summary.astype(spec.summary_dtype), keys.astype(spec.key_dtype)), totals

    def level_bytes(self) -> int:
        return self.num_nodes * self.spec.node_bytes

    def sum_inclusive(self, n: int, i: int) -> int:
        return int(self.summary[n, i // self.spec.seg_len]) + int(self.keys[n, i])

    def prefix_exclusive(self, n: int, k: int) -> int:
        before = int(self.summary[n, k // self.spec.seg_len])
        if k % self.spec.seg_len:
            before += int(self.keys[n, k - 1])
        return before

    def update(self, n: int, i: int, sign: int) -> None:
        L = self.spec.seg_len
        j, r = divmod(i, L)
        self.summary[n] += self._t_summary[sign][j]
        self.keys[n, j * L : (j + 1) * L] += self._t_segment[sign][r]

    def search(self, n: int, x: int) -> tuple[int, int]:
        """First key index i of node n with prefix(0..i) > x; returns (i, before).

        `before` is the sum strictly before key i.  Requires
        0 <= x < node total.  Lane semantics: compare all lanes at once,
        take the first set lane of the mask.
        """
        L = self.spec.seg_len
        summ = self.summary[n]
        over = summ > x
        t = int(np.argmax(over)) - 1 if over.any() else self.spec.segments - 1
        base = int(summ[t])
        seg = self.keys[n, t * L : (t + 1) * L]
        over_k = seg > x - base
        assert over_k.any(), "search target not below node total"
        k = int(np.argmax(over_k))
        i = t * L + k
        before = base + (int(seg[k - 1]) if k else 0)
        return i, before


class ScalarLevel:
    """One tree level as Python lists with sequential loops (no lane tricks)."""

    def __init__(self, spec: NodeSpec, summary: list[list[int]], keys: list[list[int]]) -> None:
        self.spec = spec
        self.summary = summary
        self.keys = keys
        self.num_nodes = len(summary)

    @classmethod
    def build(cls, spec: NodeSpec, entries: np.ndarray) -> tuple["ScalarLevel", np.ndarray]:
        summary, keys, totals = _build_arrays(spec, entries)
        return cls(spec, summary.tolist(), keys.tolist()), totals

    def level_bytes(self) -> int:
        return self.num_nodes * self.spec.node_bytes

    def sum_inclusive(self, n: int, i: int) -> int:
        return self.summary[n][i // self.spec.seg_len] + self.keys[n][i]

    def prefix_exclusive(self, n: int, k: int) -> int:
        before = self.summary[n][k // self.spec.seg_len]
        if k % self.spec.seg_len:
            before += self.keys[n][k - 1]
        return before

    def update(self, n: int, i: int, sign: int) -> None:
        L = self.spec.seg_len
        j, r = divmod(i, L)
        summary = self.summary[n]
        for s in range(j + 1, self.spec.segments):
            summary[s] += sign
        keys = self.keys[n]
        for t in range(j * L + r, (j + 1) * L):
            keys[t] += sign

    def search(self, n: int, x: int) -> tuple[int, int]:
        L = self.spec.seg_len
        summary = self.summary[n]
        t = self.spec.segments - 1
        for s in range(1, self.spec.segments):
            if summary[s] > x:
                t = s - 1
                break
        base = summary[t]
        keys = self.keys[n]
        before = base
        for k in range(L):
            key = keys[t * L + k]
            if base + key > x:
                return t * L + k, before
            before = base + key
        raise AssertionError("search target not below node total")
