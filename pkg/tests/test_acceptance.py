"""Acceptance gate: one test per criterion, hard bounds included.

Each test prints its own PASS line (visible with -s); the conftest
summary hook prints a per-criterion verdict table at the end of every
run either way.
"""

import csv
import itertools
import time

import numpy as np

from rsbitmap import FenwickTree, MutableBitmap, NaiveBitmap, NaivePrefixSum, PrefixIndex
from rsbitmap.bench import CSV_COLUMNS, main as bench_main
from rsbitmap.blocks import (
    ALL_RANK_STRATEGIES,
    ALL_SELECT_STRATEGIES,
    compile_rank,
    compile_select,
)
from rsbitmap.nodes import NARROW_LAYOUTS, WIDE_LAYOUTS
from rsbitmap.segtree import plan_levels, planned_bytes

EXAMPLE = "01101101010101110"


def test_criterion_1_worked_example():
    t0 = time.perf_counter()
    checked = 0
    for block_bits in (64, 256, 512):
        for index in ("scalar", "narrow", "wide", "fenwick"):
            for rank_s in ALL_RANK_STRATEGIES:
                for select_s in ALL_SELECT_STRATEGIES:
                    bm = MutableBitmap.from_bits(
                        EXAMPLE, block_bits=block_bits, index=index,
                        rank_strategy=rank_s, select_strategy=select_s,
                    )
                    assert bm.u == 17 and bm.n == 10
                    assert bm.rank(7) == 5
                    assert bm.select(7) == 13
                    bm.flip(3)
                    bm.flip(6)
                    assert bm.rank(7) == 7
                    assert bm.select(7) == 9
                    checked += 1
    elapsed = time.perf_counter() - t0
    assert checked == 3 * 4 * len(ALL_RANK_STRATEGIES) * len(ALL_SELECT_STRATEGIES)
    assert elapsed < 1.0, f"worked example took {elapsed:.2f}s"
    print(f"\n[criterion 1] PASS: worked example exact on {checked} configurations "
          f"({elapsed:.2f}s)")


def test_criterion_2_space_per_element():
    m = 1 << 24
    narrow = planned_bytes(m, "narrow") / m
    wide = planned_bytes(m, "wide") / m
    assert abs(narrow - 2.29) <= 0.01, narrow
    assert abs(wide - 2.13) <= 0.01, wide
    print(f"\n[criterion 2] PASS: bytes/entry at m=2^24: narrow {narrow:.4f}, wide {wide:.4f}")


def test_criterion_3_overhead_percentages():
    r256 = MutableBitmap.planned_space(1 << 32, 256, "wide")["overhead_percent"]
    r512 = MutableBitmap.planned_space(1 << 32, 512, "wide")["overhead_percent"]
    r64 = MutableBitmap.planned_space(1 << 30, 64, "wide")["overhead_percent"]
    assert r256 <= 7.2, r256
    assert r512 <= 3.6, r512
    assert abs(r64 - 26.7) <= 0.3, r64
    print(f"\n[criterion 3] PASS: overhead B=256 {r256:.2f}% <= 7.2, "
          f"B=512 {r512:.2f}% <= 3.6, B=64 {r64:.2f}% ~ 26.7")


def test_criterion_4_node_byte_sizes():
    narrow = [NARROW_LAYOUTS[b].node_bytes for b in (32, 64, 128)]
    wide = [WIDE_LAYOUTS[b].node_bytes for b in (128, 256, 512)]
    assert narrow == [160, 288, 288], narrow
    assert wide == [576, 1088, 1088], wide
    print(f"\n[criterion 4] PASS: node bytes narrow {narrow}, wide {wide}")


def test_criterion_5_tree_height_selection():
    narrow_expect = {
        1 << 7: 1, (1 << 7) + 1: 2,
        1 << 13: 2, (1 << 13) + 1: 3,
        1 << 19: 3, (1 << 19) + 1: 4,
        1 << 24: 4,
    }
    wide_expect = {
        1 << 9: 1, (1 << 9) + 1: 2,
        1 << 17: 2, (1 << 17) + 1: 3,
        1 << 24: 3,
    }
    for config, expect in (("narrow", narrow_expect), ("wide", wide_expect)):
        for m, height in expect.items():
            assert len(plan_levels(m, config)) == height, (config, m)
            built = PrefixIndex(np.zeros(m, dtype=np.int64), config=config)
            assert len(built.levels) == height, (config, m)
    print("\n[criterion 5] PASS: built tree heights match at all capacity boundaries")


def _replay_bitmap_cell(u, density, block_bits, index, ops, seed):
    rng = np.random.default_rng(seed)
    bits = rng.random(u) < density
    bm = MutableBitmap.from_bits(bits.astype(np.uint8).tolist(), block_bits=block_bits, index=index)
    oracle = NaiveBitmap.zeros(u)
    oracle.bits = bits.copy()
    kinds = rng.integers(0, 4, size=ops)
    positions = rng.integers(0, u, size=ops)
    mismatches = 0
    for t in range(ops):
        kind, i = int(kinds[t]), int(positions[t])
        if kind == 0:
            bm.flip(i)
            oracle.flip(i)
        elif kind == 1:
            mismatches += bm.access(i) != oracle.access(i)
        elif kind == 2:
            mismatches += bm.rank(i) != oracle.rank(i)
        elif bm.n:
            k = i % bm.n
            mismatches += bm.select(k) != oracle.select(k)
    mismatches += bm.n != oracle.n
    return mismatches


def _replay_index_cell(m, config, ops, seed):
    rng = np.random.default_rng(seed)
    values = rng.integers(0, 65, size=m)
    tree = PrefixIndex(values, config=config)
    fenwick = FenwickTree(values.tolist())
    oracle = NaivePrefixSum(values)
    kinds = rng.integers(0, 3, size=ops)
    positions = rng.integers(0, m, size=ops)
    mismatches = 0
    for t in range(ops):
        kind, i = int(kinds[t]), int(positions[t])
        if kind == 0:
            sign = 1 if int(oracle.values[i]) == 0 else int(rng.integers(0, 2)) * 2 - 1
            tree.update(i, sign)
            fenwick.update(i, sign)
            oracle.update(i, sign)
        elif kind == 1:
            want = oracle.sum(i)
            mismatches += tree.sum(i) != want
            mismatches += fenwick.sum(i) != want
        else:
            total = oracle.total
            if not total:
                continue
            x = int(rng.integers(0, total))
            want = oracle.search(x)
            mismatches += tree.search(x) != want
            mismatches += fenwick.search(x) != want
    mismatches += tree.total != oracle.total or fenwick.total != oracle.total
    return mismatches


def test_criterion_6_oracle_equivalence():
    t0 = time.perf_counter()
    universes = [17, 512, 513, 1 << 16, 1 << 20]
    densities = [0.1, 0.3, 0.5, 0.9]
    blocks = [64, 256, 512]
    indexes = ["wide", "narrow", "fenwick", "scalar"]
    cells = list(itertools.product(universes, densities))
    ops_per_cell = 100_000 // len(cells)
    mismatches = 0
    for ci, (u, density) in enumerate(cells):
        mismatches += _replay_bitmap_cell(
            u, density, blocks[ci % 3], indexes[ci % 4], ops_per_cell, seed=1000 + ci
        )
    assert mismatches == 0, f"{mismatches} bitmap mismatches vs naive oracle"

    index_cells = [
        (1, "narrow"), (16, "scalar"), (97, "wide"), (513, "wide"), (640, "scalar"),
        (2048, "narrow"), (5000, "narrow"), (8193, "narrow"), (70000, "wide"),
        (131073, "wide"),
    ]
    ops_per_cell = 100_000 // len(index_cells)
    index_mismatches = 0
    for ci, (m, config) in enumerate(index_cells):
        index_mismatches += _replay_index_cell(m, config, ops_per_cell, seed=2000 + ci)
    assert index_mismatches == 0, f"{index_mismatches} index mismatches vs linear scan"
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0, f"oracle equivalence took {elapsed:.1f}s"
    print(f"\n[criterion 6] PASS: 2x100000 mixed operations, zero mismatches "
          f"({elapsed:.1f}s)")


def test_criterion_7_cross_variant_equivalence():
    rng = np.random.default_rng(77)
    rank_fns = [compile_rank(s) for s in ALL_RANK_STRATEGIES]
    select_fns = [compile_select(s) for s in ALL_SELECT_STRATEGIES]
    pairs = 10_000
    for block_bits in (64, 256, 512):
        nwords = block_bits // 64
        raw = rng.integers(0, 1 << 64, size=(pairs, nwords), dtype=np.uint64)
        thin = rng.integers(0, 1 << 64, size=(pairs, nwords), dtype=np.uint64)
        sparsify = rng.random(pairs)
        queries = rng.integers(0, block_bits, size=pairs)
        for p in range(pairs):
            if sparsify[p] < 0.3:  # mix in ~25%-density blocks
                words = [int(a) & int(b) for a, b in zip(raw[p], thin[p])]
            else:
                words = [int(w) for w in raw[p]]
            i = int(queries[p])
            want = rank_fns[0](words, i)
            for fn in rank_fns[1:]:
                assert fn(words, i) == want, (block_bits, p, i)
            total = sum(w.bit_count() for w in words)
            if not total:
                words[0] |= 1 << (i & 63)
                total = sum(w.bit_count() for w in words)
            k = i % total
            want_pos = select_fns[0](words, k)
            for fn in select_fns[1:]:
                assert fn(words, k) == want_pos, (block_bits, p, k)
    print(f"\n[criterion 7] PASS: {len(rank_fns)} rank and {len(select_fns)} select "
          f"strategies agree on {pairs} blocks per size")


def test_criterion_8_duality():
    rng = np.random.default_rng(20250816)
    universes = [17, 100, 511, 512, 513, 1000, 4096, 1 << 16]
    for trial in range(20):
        u = int(rng.choice(universes))
        density = float(rng.uniform(0.05, 0.95))
        block_bits = int(rng.choice([64, 256, 512]))
        index = ["wide", "narrow", "fenwick", "scalar"][trial % 4]
        bits = (rng.random(u) < density).astype(np.uint8).tolist()
        bm = MutableBitmap.from_bits(bits, block_bits=block_bits, index=index)
        for k in range(bm.n):
            assert bm.rank(bm.select(k)) == k + 1, (trial, u, k)
    print("\n[criterion 8] PASS: rank(select(k)) = k+1 for every k on 20 random bitmaps")


def test_criterion_9_exhaustive_small_universe():
    t0 = time.perf_counter()
    u = 512
    rng = np.random.default_rng(99)
    bits = rng.random(u) < 0.5
    bm = MutableBitmap.from_bits(bits.astype(np.uint8).tolist())

    def verify():
        prefix = np.cumsum(bits)
        ones = np.flatnonzero(bits)
        assert bm.n == len(ones)
        for i in range(u):
            assert bm.access(i) == int(bits[i])
            assert bm.rank(i) == int(prefix[i])
        for k in range(len(ones)):
            assert bm.select(k) == int(ones[k])

    verify()
    flips = rng.integers(0, u, size=1000)
    for pos in flips:
        pos = int(pos)
        bm.flip(pos)
        bits[pos] = not bits[pos]
        verify()
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0, f"exhaustive check took {elapsed:.1f}s"
    print(f"\n[criterion 9] PASS: u=512 fully verified after each of 1000 flips "
          f"({elapsed:.1f}s)")


def test_criterion_10_bench_csv_sweeps(tmp_path):
    # rank/select/flip trends per block size, mutable structure
    for block_bits in (64, 256, 512):
        out = tmp_path / f"bitmap_b{block_bits}.csv"
        code = bench_main([
            "--sweep", "10:12", "--ops", "rank,select,flip", "--structures", "mutable",
            "--block", str(block_bits), "--queries", "50", "--csv", str(out),
        ])
        assert code == 0
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 9  # 3 ops x 3 sizes
        assert tuple(rows[0].keys()) == CSV_COLUMNS
        assert all(float(r["ns_avg"]) > 0 for r in rows)
        assert all(r["block"] == str(block_bits) for r in rows)

    # sum/update/search: segment tree vs fenwick baseline
    out = tmp_path / "index_ops.csv"
    code = bench_main([
        "--sweep", "10:12", "--ops", "sum,update,search",
        "--structures", "mutable,fenwick", "--queries", "50", "--csv", str(out),
    ])
    assert code == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 18  # 3 ops x 3 sizes x 2 structures
    structures = {r["structure"] for r in rows}
    assert structures == {"mutable", "fenwick"}
    print("\n[criterion 10] PASS: CSV sweeps emitted for rank/select/flip per block size "
          "and sum/update/search vs fenwick")
