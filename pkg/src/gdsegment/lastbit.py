"""The LastBit base/deviation transform.

Splits an unsigned 32-bit value into a base (the high ``32 - n`` bits) and a
deviation (the low ``n`` bits). The transform partitions the integer range
into disjoint regions of ``2**n`` consecutive values that all share one base,
and it preserves ordering on both components: for v1 < v2 either
base(v1) < base(v2), or the bases are equal and dev(v1) < dev(v2). Segment
encoders lean on that region structure to answer predicates without
reconstructing values.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

MIN_DEV_SIZE = 1
MAX_DEV_SIZE = 30
VALUE_BITS = 32


class BaseDeviation(NamedTuple):
    base: int
    deviation: int


def check_dev_size(n: int) -> int:
    if not MIN_DEV_SIZE <= n <= MAX_DEV_SIZE:
        raise ValueError(f"deviation size must be in {MIN_DEV_SIZE}..{MAX_DEV_SIZE}, got {n}")
    return n


def _check_value(value: int) -> int:
    if not 0 <= value <= 0xFFFFFFFF:
        raise ValueError(f"value out of unsigned 32-bit range: {value}")
    return value


def split(value: int, n: int) -> BaseDeviation:
    """Split ``value`` into (base, deviation) with an ``n``-bit deviation."""
    check_dev_size(n)
    _check_value(value)
    return BaseDeviation(value >> n, value & ((1 << n) - 1))


def merge(base: int, deviation: int, n: int) -> int:
    """Inverse of :func:`split`: reattach the low ``n`` bits to the base."""
    check_dev_size(n)
    if not 0 <= deviation < (1 << n):
        raise ValueError(f"deviation {deviation} does not fit in {n} bits")
    if not 0 <= base < (1 << (VALUE_BITS - n)):
        raise ValueError(f"base {base} does not fit in {VALUE_BITS - n} bits")
    return (base << n) | deviation


def region_bounds(base: int, n: int) -> tuple[int, int]:
    """Inclusive value range covered by ``base``: [base*2^n, base*2^n + 2^n - 1].

    Regions of consecutive bases are adjacent and disjoint.
    """
    check_dev_size(n)
    if not 0 <= base < (1 << (VALUE_BITS - n)):
        raise ValueError(f"base {base} does not fit in {VALUE_BITS - n} bits")
    lo = base << n
    return lo, lo + (1 << n) - 1


def split_array(values: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized split of a uint32 array into (bases, deviations)."""
    check_dev_size(n)
    v = np.asarray(values, dtype=np.uint32)
    return (v >> np.uint32(n)), (v & np.uint32((1 << n) - 1))


def merge_array(bases: np.ndarray, deviations: np.ndarray, n: int) -> np.ndarray:
    """Vectorized inverse: merge base/deviation arrays back into values."""
    check_dev_size(n)
    b = np.asarray(bases, dtype=np.uint64) << np.uint64(n)
    return (b | np.asarray(deviations, dtype=np.uint64)).astype(np.uint32)
