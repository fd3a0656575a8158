"""Fixed-width bit-packed integer vectors.

The storage primitive behind every segment encoder in this package: a
sequence of unsigned integers stored at an exact bit width (1..32 bits per
element), with elements allowed to straddle 64-bit word boundaries. Packing
and bulk reads are vectorized with numpy; single-element reads are O(1).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

WORD_BITS = 64
MAX_WIDTH = 32


@lru_cache(maxsize=8)
def _arange(n: int) -> np.ndarray:
    # shared read-only index vector for full-vector gathers
    return np.arange(n, dtype=np.int64)


def min_width(max_value: int) -> int:
    """Smallest width w in 1..32 such that max_value < 2**w.

    Zero still needs one bit; a zero-width sequence is not representable.
    """
    if max_value < 0 or max_value > 0xFFFFFFFF:
        raise ValueError(f"max_value out of unsigned 32-bit range: {max_value}")
    return max(1, int(max_value).bit_length())


class PackedVector:
    """Immutable fixed-width sequence of unsigned integers.

    Construct with :func:`pack`. Reads are exact round-trips of the packed
    values. ``read_count`` tallies payload reads (one per element fetched)
    so callers can assert how many list accesses an operation performs.
    """

    __slots__ = ("width", "length", "_buf", "_raw", "read_count")

    def __init__(self, width: int, length: int, buf: np.ndarray):
        self.width = width
        self.length = length
        self._buf = buf            # uint8 payload + 8 guard bytes
        self._raw = buf.tobytes()  # same bytes, fast scalar slicing
        self.read_count = 0

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        return self.read(i)

    def read(self, i: int) -> int:
        """Value stored at position ``i``."""
        if not 0 <= i < self.length:
            raise IndexError(f"position {i} out of range for length {self.length}")
        self.read_count += 1
        bitpos = i * self.width
        byte = bitpos >> 3
        chunk = int.from_bytes(self._raw[byte : byte + 5], "little")
        return (chunk >> (bitpos & 7)) & ((1 << self.width) - 1)

    def gather(self, indexes: np.ndarray) -> np.ndarray:
        """Vectorized read of many positions; returns uint32 values."""
        idx = np.asarray(indexes, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= self.length):
            raise IndexError("gather index out of range")
        self.read_count += int(idx.size)
        bitpos = idx * self.width
        byte = bitpos >> 3
        b = self._buf
        chunk = b[byte].astype(np.uint64)
        # an element spans at most 7 offset bits plus its width
        for k in range(1, (7 + self.width + 7) // 8):
            chunk |= b[byte + k].astype(np.uint64) << np.uint64(8 * k)
        out = (chunk >> (bitpos & 7).astype(np.uint64)) & np.uint64((1 << self.width) - 1)
        return out.astype(np.uint32)

    def to_array(self) -> np.ndarray:
        """All stored values in order as a uint32 array."""
        return self.gather(_arange(self.length))

    def searchsorted(self, key: int, side: str = "left", lo: int = 0, hi: int | None = None) -> int:
        """Binary search over a sorted (sub)range, reading O(log n) elements."""
        if hi is None:
            hi = self.length
        while lo < hi:
            mid = (lo + hi) // 2
            v = self.read(mid)
            if v < key or (side == "right" and v == key):
                lo = mid + 1
            else:
                hi = mid
        return lo

    @property
    def size_bits(self) -> int:
        return self.word_count * WORD_BITS

    @property
    def size_bytes(self) -> int:
        return self.word_count * 8

    @property
    def word_count(self) -> int:
        return -(-self.width * self.length // WORD_BITS)

    def __repr__(self) -> str:
        return f"PackedVector(width={self.width}, length={self.length})"


def pack(values, width: int) -> PackedVector:
    """Bit-pack ``values`` at ``width`` bits per element.

    Every value must satisfy ``value < 2**width``; violations are rejected
    naming the first offending index.
    """
    if not 1 <= width <= MAX_WIDTH:
        raise ValueError(f"width must be in 1..{MAX_WIDTH}, got {width}")
    vals = np.ascontiguousarray(values, dtype=np.uint64)
    if vals.ndim != 1:
        raise ValueError("pack expects a one-dimensional sequence")
    n = vals.size
    if n and width < 64:
        over = vals >> np.uint64(width)
        if over.any():
            bad = int(np.argmax(over > 0))
            raise ValueError(
                f"value {int(vals[bad])} at index {bad} exceeds {width}-bit width"
            )
    nwords = -(-width * n // WORD_BITS)
    buf = np.zeros(nwords * 8 + 8, dtype=np.uint8)
    if n:
        shifts = np.arange(width, dtype=np.uint64)
        bits = ((vals[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
        packed = np.packbits(bits.ravel(), bitorder="little")
        buf[: packed.size] = packed
    return PackedVector(width, n, buf)
