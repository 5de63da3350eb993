"""Benchmark and self-check CLI.

Generates random bitmaps (each bit set independently with probability
`density`, seeded PRNG, so runs are reproducible), pre-generates query
workloads, runs one untimed warm-up pass and one timed pass, and reports
nanoseconds per operation plus space figures.  Timings are measured in
chunks so min/avg/max per-op times can be quoted; they are informational
only and never asserted.

Operations cover both the bitmap surface (rank/select/flip/access) and
the bare prefix-sum index surface (sum/update/search) over the per-block
counts of the same random bitmap.  Structures:

    mutable  bitmap (or bare index) with the configured segment tree
    fenwick  same, with the Fenwick baseline as the index
    naive    linear-scan reference structure

Modes: single run (default), --sweep LO:HI for one CSV row per
(structure, op, logU), --selfcheck for an oracle-equivalence replay, and
--space-report for the space figures alone (computed analytically, so
any supported size is fine).  CSV columns:

    structure,op,logU,density,block,index,ns_avg,ns_min,ns_max,bytes_index,overhead_pct

Sizes are capped at logU = 26 by default to keep desk runs under a
minute; raise --cap-log-u to go bigger.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .bitmap import INDEX_CONFIGS, MutableBitmap
from .blocks import RankStrategy, SelectStrategy, SUPPORTED_BLOCK_BITS
from .fenwick import FenwickTree
from .naive import NaiveBitmap, NaivePrefixSum
from .segtree import PrefixIndex
from .words import (
    POPCOUNT_BACKENDS,
    PREFIX_STRATEGIES,
    SEARCH_STRATEGIES,
    SELECT_WORD_BACKENDS,
)

BITMAP_OPS = ("rank", "select", "flip", "access")
INDEX_OPS = ("sum", "update", "search")
ALL_OPS = BITMAP_OPS + INDEX_OPS
STRUCTURES = ("mutable", "fenwick", "naive")

DEFAULT_QUERIES = 1_000_000
DEFAULT_CAP_LOG_U = 26


@dataclass
class WorkloadSpec:
    """One benchmark configuration; deterministic given the seed."""

    op: str
    log_u: int
    density: float = 0.3
    queries: int = DEFAULT_QUERIES
    structure: str = "mutable"
    block_bits: int = 256
    index_config: str = "wide"
    seed: int = 42
    rank_strategy: Optional[RankStrategy] = None
    select_strategy: Optional[SelectStrategy] = None

    def __post_init__(self) -> None:
        if self.op not in ALL_OPS:
            raise ValueError(f"unknown op {self.op!r}")
        if self.structure not in STRUCTURES:
            raise ValueError(f"unknown structure {self.structure!r}")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError(f"density {self.density} outside [0, 1]")
        if self.queries < 1:
            raise ValueError("queries must be at least 1")
        if self.log_u < 6:
            raise ValueError("log-u below 6 leaves no room for a word")
        if self.block_bits not in SUPPORTED_BLOCK_BITS:
            raise ValueError(f"unsupported block size {self.block_bits}")
        if self.index_config not in INDEX_CONFIGS:
            raise ValueError(f"unknown index config {self.index_config!r}")


@dataclass
class BenchResult:
    spec: WorkloadSpec
    ns_avg: float
    ns_min: float
    ns_max: float
    bytes_bitmap: int
    bytes_index: int
    overhead_percent: float

    def csv_row(self) -> dict:
        s = self.spec
        index_label = {"mutable": s.index_config, "fenwick": "fenwick", "naive": "none"}[
            s.structure
        ]
        return {
            "structure": s.structure,
            "op": s.op,
            "logU": s.log_u,
            "density": s.density,
            "block": s.block_bits,
            "index": index_label,
            "ns_avg": round(self.ns_avg, 2),
            "ns_min": round(self.ns_min, 2),
            "ns_max": round(self.ns_max, 2),
            "bytes_index": self.bytes_index,
            "overhead_pct": round(self.overhead_percent, 4),
        }


CSV_COLUMNS = (
    "structure",
    "op",
    "logU",
    "density",
    "block",
    "index",
    "ns_avg",
    "ns_min",
    "ns_max",
    "bytes_index",
    "overhead_pct",
)


def _random_bits(u: int, density: float, rng: np.random.Generator) -> np.ndarray:
    out = np.empty(u, dtype=bool)
    step = 1 << 22
    for lo in range(0, u, step):
        hi = min(u, lo + step)
        out[lo:hi] = rng.random(hi - lo) < density
    return out


def _bits_to_words(bits: np.ndarray) -> list[int]:
    packed = np.packbits(bits, bitorder="little").tobytes()
    packed += b"\0" * (-len(packed) % 8)
    return np.frombuffer(packed, dtype="<u8").tolist()


def _build_target(spec: WorkloadSpec, bits: np.ndarray):
    """Materialize the structure the workload runs against."""
    u = len(bits)
    if spec.op in BITMAP_OPS:
        if spec.structure == "naive":
            bm = NaiveBitmap.zeros(u)
            bm.bits = bits.copy()
            return bm
        index = "fenwick" if spec.structure == "fenwick" else spec.index_config
        return MutableBitmap(
            _bits_to_words(bits), u, spec.block_bits, index,
            spec.rank_strategy, spec.select_strategy,
        )
    # Index ops run on the per-block one-counts of the same bitmap.
    m = -(-u // spec.block_bits)
    padded = np.zeros(m * spec.block_bits, dtype=bool)
    padded[:u] = bits
    counts = padded.reshape(m, spec.block_bits).sum(axis=1).astype(np.int64)
    if spec.structure == "naive":
        return NaivePrefixSum(counts)
    if spec.structure == "fenwick" or spec.index_config == "fenwick":
        return FenwickTree(counts)
    return PrefixIndex(counts, spec.index_config)


def _generate_queries(spec: WorkloadSpec, target, rng: np.random.Generator) -> list[tuple]:
    u = 1 << spec.log_u
    q = spec.queries
    if spec.op in ("rank", "access", "flip"):
        return [(int(i),) for i in rng.integers(0, u, size=q)]
    if spec.op == "select":
        n = target.n
        if n < 1:
            raise ValueError("select workload needs at least one set bit (density too low)")
        return [(int(k),) for k in rng.integers(0, n, size=q)]
    m = -(-u // spec.block_bits)
    if spec.op == "sum":
        return [(int(i),) for i in rng.integers(0, m, size=q)]
    if spec.op == "update":
        # +1/-1 pairs on the same entry keep every counter legal forever.
        idx = rng.integers(0, m, size=-(-q // 2))
        out: list[tuple] = []
        for i in idx:
            out.append((int(i), 1))
            out.append((int(i), -1))
        return out[:q]
    if spec.op == "search":
        total = target.total
        if total < 1:
            raise ValueError("search workload needs a nonzero total (density too low)")
        return [(int(x),) for x in rng.integers(0, total, size=q)]
    raise AssertionError(spec.op)


def _space_figures(spec: WorkloadSpec, target) -> tuple[int, int]:
    bitmap_bytes = (-(-(1 << spec.log_u) // 64)) * 8
    if isinstance(target, MutableBitmap):
        return bitmap_bytes, target.index.space_bytes()
    if isinstance(target, NaiveBitmap):
        return bitmap_bytes, 0
    return bitmap_bytes, target.space_bytes()


def _timed_pass(fn: Callable, queries: Sequence[tuple]) -> tuple[float, float, float]:
    """Run fn(*q) over all queries; chunked so min/max are meaningful."""
    q = len(queries)
    chunks = min(64, q)
    per = q // chunks
    chunk_avgs = []
    total_ns = 0
    done = 0
    for c in range(chunks):
        hi = q if c == chunks - 1 else done + per
        t0 = time.perf_counter_ns()
        for args in queries[done:hi]:
            fn(*args)
        t1 = time.perf_counter_ns()
        total_ns += t1 - t0
        chunk_avgs.append((t1 - t0) / (hi - done))
        done = hi
    return total_ns / q, min(chunk_avgs), max(chunk_avgs)


def run_bench(spec: WorkloadSpec) -> BenchResult:
    """Build the structure, warm up untimed, then time the query pass."""
    rng = np.random.default_rng(spec.seed)
    bits = _random_bits(1 << spec.log_u, spec.density, rng)
    target = _build_target(spec, bits)
    queries = _generate_queries(spec, target, rng)
    fn = getattr(target, spec.op)
    for args in queries:  # warm-up, untimed
        fn(*args)
    ns_avg, ns_min, ns_max = _timed_pass(fn, queries)
    bytes_bitmap, bytes_index = _space_figures(spec, target)
    return BenchResult(
        spec, ns_avg, ns_min, ns_max, bytes_bitmap, bytes_index,
        100.0 * bytes_index / bytes_bitmap,
    )


def run_sweep(
    log_us: Sequence[int],
    ops: Sequence[str],
    structures: Sequence[str],
    base: WorkloadSpec,
    csv_path: str,
    plot: bool = False,
) -> list[BenchResult]:
    """One row per (structure, op, logU); skips empty select/search domains."""
    results = []
    for structure in structures:
        for op in ops:
            for log_u in log_us:
                spec = WorkloadSpec(
                    op=op, log_u=log_u, density=base.density, queries=base.queries,
                    structure=structure, block_bits=base.block_bits,
                    index_config=base.index_config, seed=base.seed,
                    rank_strategy=base.rank_strategy, select_strategy=base.select_strategy,
                )
                try:
                    results.append(run_bench(spec))
                except ValueError as exc:
                    print(
                        f"warning: skipping {structure}/{op}/logU={log_u}: {exc}",
                        file=sys.stderr,
                    )
    write_csv(csv_path, results)
    if plot:
        write_gnuplot(_gp_path(csv_path), results)
    return results


def write_csv(path: str, results: Sequence[BenchResult]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for r in results:
            writer.writerow(r.csv_row())


def _gp_path(csv_path: str) -> str:
    return (csv_path[: -len(".csv")] if csv_path.endswith(".csv") else csv_path) + ".gp"


def write_gnuplot(path: str, results: Sequence[BenchResult]) -> None:
    """Companion gnuplot script: ns/op against logU, one series per line."""
    series: dict[tuple[str, str], list[BenchResult]] = {}
    for r in results:
        series.setdefault((r.spec.structure, r.spec.op), []).append(r)
    lines = [
        "# generated benchmark plot script",
        "set xlabel 'log2 of bitmap bits'",
        "set ylabel 'ns per operation'",
        "set key left top",
        "set grid",
    ]
    plot_terms = []
    for idx, ((structure, op), rows) in enumerate(sorted(series.items())):
        rows.sort(key=lambda r: r.spec.log_u)
        lines.append(f"$series{idx} << EOD")
        for r in rows:
            lines.append(f"{r.spec.log_u} {r.ns_avg:.2f} {r.ns_min:.2f} {r.ns_max:.2f}")
        lines.append("EOD")
        plot_terms.append(f"$series{idx} using 1:2 with linespoints title '{structure} {op}'")
    lines.append("plot " + ", \\\n     ".join(plot_terms) if plot_terms else "# nothing to plot")
    lines.append("pause -1 'press enter to close'")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def run_selfcheck(spec: WorkloadSpec, ops: int = 100_000) -> int:
    """Replay mixed random operations against the naive oracle.

    Returns 0 when every output matches, 1 on the first mismatch.
    """
    rng = np.random.default_rng(spec.seed)
    u = 1 << spec.log_u
    bits = _random_bits(u, spec.density, rng)
    index = "fenwick" if spec.structure == "fenwick" else spec.index_config
    bm = MutableBitmap(
        _bits_to_words(bits), u, spec.block_bits, index,
        spec.rank_strategy, spec.select_strategy,
    )
    oracle = NaiveBitmap.zeros(u)
    oracle.bits = bits.copy()
    kinds = rng.integers(0, 4, size=ops)
    positions = rng.integers(0, u, size=ops)
    for t in range(ops):
        kind, i = int(kinds[t]), int(positions[t])
        if kind == 0:
            bm.flip(i)
            oracle.flip(i)
        elif kind == 1:
            got, want = bm.access(i), oracle.access(i)
            if got != want:
                print(f"selfcheck mismatch: access({i}) = {got}, oracle {want}", file=sys.stderr)
                return 1
        elif kind == 2:
            got, want = bm.rank(i), oracle.rank(i)
            if got != want:
                print(f"selfcheck mismatch: rank({i}) = {got}, oracle {want}", file=sys.stderr)
                return 1
        else:
            if bm.n == 0:
                continue
            k = i % bm.n
            got, want = bm.select(k), oracle.select(k)
            if got != want:
                print(f"selfcheck mismatch: select({k}) = {got}, oracle {want}", file=sys.stderr)
                return 1
    if bm.n != oracle.n:
        print(f"selfcheck mismatch: n = {bm.n}, oracle {oracle.n}", file=sys.stderr)
        return 1
    print(f"selfcheck ok: {ops} operations, final n = {bm.n}")
    return 0


def _parse_sweep(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError("expected LO:HI")
    try:
        lo_i, hi_i = int(lo), int(hi)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected integers LO:HI") from exc
    if lo_i > hi_i:
        raise argparse.ArgumentTypeError("sweep range must have LO <= HI")
    return lo_i, hi_i


def _csv_list(valid: Sequence[str], what: str):
    def parse(text: str) -> list[str]:
        items = [t.strip() for t in text.split(",") if t.strip()]
        for item in items:
            if item not in valid:
                raise argparse.ArgumentTypeError(f"unknown {what} {item!r}")
        if not items:
            raise argparse.ArgumentTypeError(f"empty {what} list")
        return items

    return parse


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rsbitmap-bench",
        description="Benchmark mutable rank/select bitmaps and their prefix-sum indexes.",
    )
    p.add_argument("--op", choices=ALL_OPS, help="operation to measure (single-run mode)")
    p.add_argument("--log-u", type=int, default=20, help="bitmap size as log2 of bits")
    p.add_argument("--density", type=float, default=0.3, help="probability a bit is set")
    p.add_argument("--queries", type=int, default=DEFAULT_QUERIES, help="queries per timed pass")
    p.add_argument("--block", type=int, choices=SUPPORTED_BLOCK_BITS, default=256,
                   help="block size in bits")
    p.add_argument("--index", choices=INDEX_CONFIGS, default="wide",
                   help="prefix-sum index configuration")
    p.add_argument("--structure", choices=STRUCTURES, default="mutable",
                   help="structure under test (single-run mode)")
    p.add_argument("--rank-popcount", choices=POPCOUNT_BACKENDS,
                   help="popcount backend for the rank kernel (and select, unless tuned)")
    p.add_argument("--rank-prefix", choices=PREFIX_STRATEGIES,
                   help="counter prefix-sum strategy for the rank kernel")
    p.add_argument("--select-search", choices=SEARCH_STRATEGIES,
                   help="target-word search strategy for the select kernel")
    p.add_argument("--select-word", choices=SELECT_WORD_BACKENDS,
                   help="select-in-word backend")
    p.add_argument("--seed", type=int, default=42, help="PRNG seed")
    p.add_argument("--csv", metavar="PATH", help="write results as CSV")
    p.add_argument("--plot", action="store_true",
                   help="also write a companion gnuplot script next to the CSV")
    p.add_argument("--selfcheck", action="store_true",
                   help="replay mixed operations against the naive oracle and exit")
    p.add_argument("--space-report", action="store_true",
                   help="print space figures for the configuration and exit")
    p.add_argument("--sweep", type=_parse_sweep, metavar="LO:HI",
                   help="sweep log-u over LO..HI inclusive (sweep mode)")
    p.add_argument("--ops", type=_csv_list(ALL_OPS, "op"), default=["rank", "select"],
                   help="comma-separated ops for sweep mode")
    p.add_argument("--structures", type=_csv_list(STRUCTURES, "structure"),
                   default=["mutable", "fenwick"],
                   help="comma-separated structures for sweep mode")
    p.add_argument("--cap-log-u", type=int, default=DEFAULT_CAP_LOG_U,
                   help="refuse sizes above this log2 (desk-scale guard)")
    return p


def _strategies_from_args(args) -> tuple[Optional[RankStrategy], Optional[SelectStrategy]]:
    rank = None
    if args.rank_popcount or args.rank_prefix:
        rank = RankStrategy(args.rank_popcount or "builtin", args.rank_prefix or "unrolled")
    select = None
    if args.rank_popcount or args.select_search or args.select_word:
        select = SelectStrategy(
            args.rank_popcount or "builtin",
            args.select_search or "loop",
            args.select_word or "pdep",
        )
    return rank, select


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    modes = sum([bool(args.selfcheck), bool(args.space_report), args.sweep is not None])
    if modes > 1:
        parser.error("--selfcheck, --space-report and --sweep are mutually exclusive")
    if not 0.0 <= args.density <= 1.0:
        parser.error(f"density {args.density} outside [0, 1]")

    def check_cap(log_u: int) -> None:
        if log_u > args.cap_log_u:
            parser.error(
                f"log-u {log_u} exceeds the desk cap {args.cap_log_u}; "
                "raise --cap-log-u to run bigger sizes"
            )

    rank_strategy, select_strategy = _strategies_from_args(args)

    if args.space_report:
        # Analytic, so the cap does not apply.
        index = args.index if args.structure != "fenwick" else "fenwick"
        report = MutableBitmap.planned_space(1 << args.log_u, args.block, index)
        print(f"u = 2^{args.log_u}, block = {args.block}, index = {index}")
        print(f"bitmap_bytes    = {report['bitmap_bytes']}")
        print(f"index_bytes     = {report['index_bytes']}")
        print(f"overhead_percent = {report['overhead_percent']:.4f}")
        return 0

    if args.selfcheck:
        check_cap(args.log_u)
        try:
            spec = WorkloadSpec(
                op="rank", log_u=args.log_u, density=args.density, queries=1,
                structure=args.structure, block_bits=args.block, index_config=args.index,
                seed=args.seed, rank_strategy=rank_strategy, select_strategy=select_strategy,
            )
        except ValueError as exc:
            parser.error(str(exc))
        return run_selfcheck(spec)

    if args.sweep is not None:
        if not args.csv:
            parser.error("--sweep requires --csv PATH")
        lo, hi = args.sweep
        check_cap(hi)
        try:
            base = WorkloadSpec(
                op="rank", log_u=lo, density=args.density, queries=args.queries,
                structure="mutable", block_bits=args.block, index_config=args.index,
                seed=args.seed, rank_strategy=rank_strategy, select_strategy=select_strategy,
            )
        except ValueError as exc:
            parser.error(str(exc))
        results = run_sweep(range(lo, hi + 1), args.ops, args.structures, base,
                            args.csv, plot=args.plot)
        print(f"wrote {len(results)} rows to {args.csv}")
        return 0

    if not args.op:
        parser.error("single-run mode needs --op (or pick --sweep/--selfcheck/--space-report)")
    check_cap(args.log_u)
    structure = args.structure
    if args.index == "fenwick" and structure == "mutable":
        structure = "fenwick"
    try:
        spec = WorkloadSpec(
            op=args.op, log_u=args.log_u, density=args.density, queries=args.queries,
            structure=structure, block_bits=args.block, index_config=args.index,
            seed=args.seed, rank_strategy=rank_strategy, select_strategy=select_strategy,
        )
        result = run_bench(spec)
    except ValueError as exc:
        parser.error(str(exc))
    row = result.csv_row()
    print(
        f"{row['structure']} {row['op']} logU={row['logU']} density={row['density']} "
        f"block={row['block']} index={row['index']}: "
        f"avg {row['ns_avg']} ns/op (min {row['ns_min']}, max {row['ns_max']}), "
        f"index {row['bytes_index']} bytes ({row['overhead_pct']}% overhead)"
    )
    if args.csv:
        write_csv(args.csv, [result])
        if args.plot:
            write_gnuplot(_gp_path(args.csv), [result])
    return 0


if __name__ == "__main__":
    sys.exit(main())
