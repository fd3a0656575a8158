"""Diagnostic measurements: compression gain, access and scan timings.

``sweep`` encodes one dataset with every deviation size from 1 to 30 and
measures each configuration, producing a table the selector can rank.
Compression gains are pure functions of the input and reproduce exactly;
timing fields depend on the machine and are reported for comparison only.

Measured tables can be cached as JSON keyed by a content hash of
(values, variant), so repeated runs load from disk instead of re-measuring.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .baselines import (
    DictionarySegment,
    HeavySegment,
    PForSegment,
    UncompressedSegment,
)
from .gdseg import GD_VARIANTS, gd_encode
from .lastbit import MAX_DEV_SIZE, MIN_DEV_SIZE
from .predicate import ALL_PREDICATES

U32_MAX = 0xFFFFFFFF

#: Incremented by every measure() call; lets callers verify cache hits.
measure_invocations = 0

BASELINE_ENCODERS = {
    "uncompressed": UncompressedSegment.encode,
    "dictionary": DictionarySegment.encode,
    "pfor": PForSegment.encode,
    "heavy": HeavySegment.encode,
}

_GD_CONFIG = re.compile(r"^gd([1-4]):n=(\d+)$")


class CacheError(Exception):
    pass


class CacheMissingError(CacheError):
    pass


class CacheCorruptError(CacheError):
    pass


class CacheStaleError(CacheError):
    pass


def compression_gain(compressed_bytes: int, original_bytes: int) -> float:
    """Percent size reduction; 0 means none, negative means inflation."""
    if original_bytes <= 0:
        raise ValueError("original size must be positive")
    return 100.0 * (1.0 - compressed_bytes / original_bytes)


@dataclass(frozen=True)
class WorkloadSpec:
    """Shape of the measurement workload.

    Defaults follow the standalone methodology: random access touches 10%
    of the offsets, scans use query values amounting to 1% of the segment
    size over the stored range extended by 10% on both ends, under all six
    predicates. Counts can be pinned absolutely for quick runs.
    """

    rand_fraction: float = 0.10
    query_fraction: float = 0.01
    rand_count: int | None = None
    query_count: int | None = None
    reps: int = 5
    warmup: int = 1

    def resolve_rand_count(self, length: int) -> int:
        if self.rand_count is not None:
            return self.rand_count
        return max(1, int(length * self.rand_fraction))

    def resolve_query_count(self, length: int) -> int:
        if self.query_count is not None:
            return self.query_count
        return max(1, int(length * self.query_fraction))


@dataclass
class MetricsRow:
    config_id: str
    dev_size: int | None
    gain_pct: float
    seq_ns: float
    rand_ns: float
    scan_us: float


@dataclass
class DiagnosticsTable:
    dataset_id: str
    rows: list[MetricsRow] = field(default_factory=list)

    def row(self, config_id: str) -> MetricsRow:
        for r in self.rows:
            if r.config_id == config_id:
                return r
        raise KeyError(f"no row with config id {config_id!r}")


def encode_config(config_id: str, values):
    """Encode ``values`` with the encoder named by a config id.

    Ids are either a baseline name (``dictionary``, ``pfor``, ``heavy``,
    ``uncompressed``) or ``gd<variant>:n=<dev size>``.
    """
    m = _GD_CONFIG.match(config_id)
    if m:
        return gd_encode(int(m.group(1)), values, int(m.group(2)))
    if config_id in BASELINE_ENCODERS:
        return BASELINE_ENCODERS[config_id](values)
    raise ValueError(f"unknown config id {config_id!r}")


def _median_time_ns(fn, reps: int, warmup: int) -> float:
    times = []
    for _ in range(warmup + reps):
        t0 = time.perf_counter_ns()
        fn()
        times.append(time.perf_counter_ns() - t0)
    timed = times[warmup:] or times
    return float(np.median(timed))


def measure_sequential(segment, reps: int = 5, warmup: int = 1) -> float:
    """Average ns per element when dereferencing every offset in order.

    Segments without random access are decompressed exactly once and read
    from the materialized vector; the decompression cost is amortized into
    the reported time.
    """
    length = len(segment)
    if segment.supports_random_access:
        def run():
            get = segment.get
            for i in range(length):
                get(i)
        total = _median_time_ns(run, reps, warmup)
    else:
        t0 = time.perf_counter_ns()
        vals = segment.decompress()
        acc = 0
        for i in range(length):
            acc += int(vals[i])
        total = time.perf_counter_ns() - t0
    return max(total, 1.0) / length


def measure_random(segment, offsets: np.ndarray, reps: int = 5, warmup: int = 1) -> float:
    """Average ns per element over a fixed set of random offsets."""
    if segment.supports_random_access:
        off = [int(o) for o in offsets]
        def run():
            get = segment.get
            for i in off:
                get(i)
        total = _median_time_ns(run, reps, warmup)
    else:
        t0 = time.perf_counter_ns()
        vals = segment.decompress()
        acc = 0
        for i in offsets:
            acc += int(vals[i])
        total = time.perf_counter_ns() - t0
    return max(total, 1.0) / len(offsets)


def measure_scan(segment, queries: np.ndarray, reps: int = 5, warmup: int = 1) -> float:
    """Average microseconds per scan, all six predicates per query value."""
    def run():
        for q in queries:
            for pred in ALL_PREDICATES:
                segment.scan(pred, int(q))
    total = _median_time_ns(run, reps, warmup)
    return max(total, 1.0) / (len(queries) * len(ALL_PREDICATES)) / 1000.0


def scan_query_values(values: np.ndarray, count: int, seed: int) -> np.ndarray:
    """Uniform query values over the stored range extended by 10% each way."""
    lo = int(values.min())
    hi = int(values.max())
    span = hi - lo
    qlo = max(0, lo - span // 10)
    qhi = min(U32_MAX, hi + span // 10)
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.integers(qlo, qhi + 1, size=count, dtype=np.uint64).astype(np.uint32)


def measure(segment, workload: WorkloadSpec | None = None, seed: int = 0,
            config_id: str = "", values: np.ndarray | None = None) -> MetricsRow:
    """Measure one encoded segment: gain plus the three speed metrics."""
    global measure_invocations
    measure_invocations += 1
    w = workload or WorkloadSpec()
    length = len(segment)
    if values is None:
        values = segment.decompress()
    gain = compression_gain(segment.size_bytes(), 4 * length)
    rng = np.random.Generator(np.random.PCG64(seed))
    offsets = rng.integers(0, length, size=w.resolve_rand_count(length))
    queries = scan_query_values(values, w.resolve_query_count(length), seed)
    dev = None
    m = _GD_CONFIG.match(config_id)
    if m:
        dev = int(m.group(2))
    return MetricsRow(
        config_id=config_id or type(segment).__name__.lower(),
        dev_size=dev,
        gain_pct=gain,
        seq_ns=measure_sequential(segment, w.reps, w.warmup),
        rand_ns=measure_random(segment, offsets, w.reps, w.warmup),
        scan_us=measure_scan(segment, queries, w.reps, w.warmup),
    )


def sweep(values, variant: int, workload: WorkloadSpec | None = None,
          seed: int = 0, dataset_id: str = "segment") -> DiagnosticsTable:
    """Measure one GD variant at every deviation size from 1 to 30."""
    if variant not in GD_VARIANTS:
        raise ValueError(f"unknown segment variant {variant}; expected 1..4")
    v = np.asarray(values, dtype=np.uint32)
    if v.size == 0:
        raise ValueError("cannot sweep an empty segment")
    table = DiagnosticsTable(dataset_id=dataset_id)
    for n in range(MIN_DEV_SIZE, MAX_DEV_SIZE + 1):
        seg = gd_encode(variant, v, n)
        table.rows.append(
            measure(seg, workload, seed=seed, config_id=f"gd{variant}:n={n}", values=v)
        )
    return table


def measure_baselines(values, workload: WorkloadSpec | None = None, seed: int = 0,
                      dataset_id: str = "segment") -> DiagnosticsTable:
    """Measure the four reference encoders on one dataset."""
    v = np.asarray(values, dtype=np.uint32)
    table = DiagnosticsTable(dataset_id=dataset_id)
    for name, encode in BASELINE_ENCODERS.items():
        seg = encode(v)
        table.rows.append(measure(seg, workload, seed=seed, config_id=name, values=v))
    return table


def content_hash(values, variant: int | str) -> str:
    h = hashlib.sha256()
    h.update(f"variant={variant};".encode())
    h.update(np.asarray(values, dtype="<u4").tobytes())
    return "sha256:" + h.hexdigest()


def cache_store(table: DiagnosticsTable, path: str | Path, digest: str,
                variant: int | str) -> None:
    doc = {
        "content_hash": digest,
        "dataset": table.dataset_id,
        "variant": variant,
        "rows": [
            {
                "config_id": r.config_id,
                "n": r.dev_size,
                "gain_pct": r.gain_pct,
                "seq_ns": r.seq_ns,
                "rand_ns": r.rand_ns,
                "scan_us": r.scan_us,
            }
            for r in table.rows
        ],
    }
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(json.dumps(doc, indent=1))


def cache_load(path: str | Path, expected_hash: str | None = None) -> DiagnosticsTable:
    """Load a cached table; verify the content hash when one is expected."""
    p = Path(path)
    if not p.exists():
        raise CacheMissingError(f"no cached metrics at {p}")
    try:
        doc = json.loads(p.read_text())
        rows = [
            MetricsRow(
                config_id=r["config_id"],
                dev_size=r["n"],
                gain_pct=float(r["gain_pct"]),
                seq_ns=float(r["seq_ns"]),
                rand_ns=float(r["rand_ns"]),
                scan_us=float(r["scan_us"]),
            )
            for r in doc["rows"]
        ]
        table = DiagnosticsTable(dataset_id=doc["dataset"], rows=rows)
        stored_hash = doc["content_hash"]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CacheCorruptError(f"malformed metrics cache at {p}: {exc}") from exc
    if expected_hash is not None and stored_hash != expected_hash:
        raise CacheStaleError(
            f"cached metrics at {p} were measured for different data "
            f"(stored {stored_hash[:24]}..., expected {expected_hash[:24]}...)"
        )
    return table


CSV_COLUMNS = ("dataset", "encoder", "dev_size", "gain_pct", "seq_ns", "rand_ns", "scan_us")


def table_to_csv_rows(table: DiagnosticsTable) -> list[dict]:
    out = []
    for r in table.rows:
        encoder = r.config_id.split(":", 1)[0]
        out.append(
            {
                "dataset": table.dataset_id,
                "encoder": encoder,
                "dev_size": "" if r.dev_size is None else r.dev_size,
                "gain_pct": f"{r.gain_pct:.3f}",
                "seq_ns": f"{r.seq_ns:.1f}",
                "rand_ns": f"{r.rand_ns:.1f}",
                "scan_us": f"{r.scan_us:.2f}",
            }
        )
    return out
