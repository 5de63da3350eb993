"""Mutable rank/select bitmaps over a searchable prefix-sum index.

Main entry points:

    MutableBitmap      the bitmap (access/flip/rank/select)
    PrefixIndex        flat b-ary segment tree over per-block counts
    FenwickTree        binary-indexed-tree baseline, same surface
    NaiveBitmap, ...   linear-scan oracles for differential testing
"""

from .bitmap import INDEX_CONFIGS, MutableBitmap, default_index_config
from .blocks import (
    Block,
    RankStrategy,
    SelectStrategy,
    block_popcount,
    block_rank,
    block_select,
    recommended_strategies,
)
from .fenwick import FenwickTree
from .naive import (
    NaiveBitmap,
    NaivePrefixSum,
    naive_access,
    naive_flip,
    naive_prefix_sum,
    naive_rank,
    naive_search,
    naive_select,
)
from .segtree import MAX_ENTRIES, PrefixIndex, plan_levels, planned_bytes

__all__ = [
    "Block",
    "FenwickTree",
    "INDEX_CONFIGS",
    "MAX_ENTRIES",
    "MutableBitmap",
    "NaiveBitmap",
    "NaivePrefixSum",
    "PrefixIndex",
    "RankStrategy",
    "SelectStrategy",
    "block_popcount",
    "block_rank",
    "block_select",
    "default_index_config",
    "naive_access",
    "naive_flip",
    "naive_prefix_sum",
    "naive_rank",
    "naive_search",
    "naive_select",
    "plan_levels",
    "planned_bytes",
    "recommended_strategies",
]

__version__ = "0.1.0"
