"""Lossless integer segment compression with generalized deduplication.

Segment encoders split values into deduplicated bases and bit-packed
deviations, answer predicate scans without decompressing, and pick their
own deviation size from measured diagnostics and usage statistics.
"""

from .baselines import (
    DictionarySegment,
    HeavySegment,
    PForSegment,
    UncompressedSegment,
)
from .bitvec import PackedVector, min_width, pack
from .datagen import DatasetKind, DatasetSpec, generate, read_values, write_values
from .gdseg import (
    GdSegment1,
    GdSegment2,
    GdSegment3,
    GdSegment4,
    RandomAccessUnsupported,
    gd_encode,
)
from .lastbit import BaseDeviation, merge, merge_array, region_bounds, split, split_array
from .predicate import ALL_PREDICATES, ScanPredicate
from .profiler import (
    DiagnosticsTable,
    MetricsRow,
    WorkloadSpec,
    cache_load,
    cache_store,
    compression_gain,
    content_hash,
    measure,
    measure_baselines,
    sweep,
)
from .selector import (
    EncodingDecision,
    Preset,
    UsageStats,
    WeightVector,
    advise,
    normalize,
    select_best,
    weights_from_usage,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_PREDICATES",
    "BaseDeviation",
    "DatasetKind",
    "DatasetSpec",
    "DiagnosticsTable",
    "DictionarySegment",
    "EncodingDecision",
    "GdSegment1",
    "GdSegment2",
    "GdSegment3",
    "GdSegment4",
    "HeavySegment",
    "MetricsRow",
    "PForSegment",
    "PackedVector",
    "Preset",
    "RandomAccessUnsupported",
    "ScanPredicate",
    "UncompressedSegment",
    "UsageStats",
    "WeightVector",
    "WorkloadSpec",
    "advise",
    "cache_load",
    "cache_store",
    "compression_gain",
    "content_hash",
    "gd_encode",
    "generate",
    "measure",
    "measure_baselines",
    "merge",
    "merge_array",
    "min_width",
    "normalize",
    "pack",
    "read_values",
    "region_bounds",
    "select_best",
    "split",
    "split_array",
    "sweep",
    "weights_from_usage",
    "write_values",
]
