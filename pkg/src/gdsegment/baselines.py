"""Reference segment encoders the GD family is benchmarked against.

* ``DictionarySegment``: sorted deduplicated values plus a byte-aligned
  attribute vector of dictionary indexes.
* ``PForSegment``: frame-of-reference in blocks of 2048 values with
  byte-aligned deltas (1, 2 or 4 bytes per block).
* ``HeavySegment``: the whole segment as one deflate-compressed blob; no
  per-element access, callers decompress once.
* ``UncompressedSegment``: the raw array, for baseline timings.
"""

from __future__ import annotations

import zlib

import numpy as np

from .bitvec import pack
from .gdseg import GD_HEADER_BYTES, RandomAccessUnsupported, as_u32
from .predicate import ScanPredicate

PFOR_BLOCK = 2048
_BYTE_WIDTHS = (1, 2, 4)


def _byte_width(max_value: int) -> int:
    """Smallest of 1/2/4 bytes that can hold ``max_value``."""
    for w in _BYTE_WIDTHS:
        if max_value < 1 << (8 * w):
            return w
    raise ValueError(f"value {max_value} exceeds 4 bytes")


def _positions(mask: np.ndarray) -> np.ndarray:
    return np.nonzero(mask)[0]


class DictionarySegment:
    """Sorted dictionary + attribute vector of dictionary offsets."""

    supports_random_access = True

    def __init__(self, dictionary, attribute_vector, length):
        self.dictionary = dictionary
        self.attribute_vector = attribute_vector
        self.length = length

    @classmethod
    def encode(cls, values) -> "DictionarySegment":
        v = as_u32(values)
        if v.size == 0:
            raise ValueError("cannot encode an empty segment")
        uniq, inv = np.unique(v, return_inverse=True)
        av_width = _byte_width(uniq.size - 1)
        return cls(pack(uniq, 32), pack(inv, 8 * av_width), v.size)

    def __len__(self) -> int:
        return self.length

    def get(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"position {i} out of range for length {self.length}")
        return self.dictionary.read(self.attribute_vector.read(i))

    def decompress(self) -> np.ndarray:
        return self.dictionary.to_array()[self.attribute_vector.to_array()]

    def scan(self, pred: ScanPredicate, query: int) -> np.ndarray:
        """Binary-search the dictionary, then filter indexes only."""
        pos = self.dictionary.searchsorted(int(query))
        present = pos < len(self.dictionary) and self.dictionary.read(pos) == query
        av = self.attribute_vector.gather(np.arange(self.length, dtype=np.int64))
        if pred is ScanPredicate.EQUALS:
            if not present:
                return np.empty(0, dtype=np.int64)
            return _positions(av == pos)
        if pred is ScanPredicate.NOT_EQUALS:
            if not present:
                return np.arange(self.length, dtype=np.int64)
            return _positions(av != pos)
        if pred is ScanPredicate.GREATER:
            return _positions(av >= pos + (1 if present else 0))
        if pred is ScanPredicate.GREATER_EQUALS:
            return _positions(av >= pos)
        if pred is ScanPredicate.LESS:
            return _positions(av < pos)
        return _positions(av < pos + (1 if present else 0))

    def size_bytes(self) -> int:
        return (
            self.dictionary.size_bytes
            + self.attribute_vector.size_bytes
            + 2 * GD_HEADER_BYTES
        )

    def payload_reads(self) -> int:
        return self.dictionary.read_count + self.attribute_vector.read_count

    def describe(self) -> list[dict]:
        return [
            {
                "list": name,
                "width_bits": pv.width,
                "length": pv.length,
                "payload_bytes": pv.size_bytes,
                "first": pv.read(0),
                "last": pv.read(pv.length - 1),
            }
            for name, pv in (
                ("dictionary", self.dictionary),
                ("attribute_vector", self.attribute_vector),
            )
        ]


class PForSegment:
    """Per-block minimum plus byte-aligned packed deltas."""

    supports_random_access = True

    def __init__(self, references, widths, blocks, length):
        self.references = references      # uint32 per block
        self.widths = widths              # delta bytes per block
        self.blocks = blocks              # one delta array per block
        self.length = length

    @classmethod
    def encode(cls, values) -> "PForSegment":
        v = as_u32(values)
        if v.size == 0:
            raise ValueError("cannot encode an empty segment")
        refs, widths, blocks = [], [], []
        for start in range(0, v.size, PFOR_BLOCK):
            chunk = v[start : start + PFOR_BLOCK]
            ref = int(chunk.min())
            deltas = chunk - np.uint32(ref)
            w = _byte_width(int(deltas.max()))
            dtype = {1: np.uint8, 2: np.uint16, 4: np.uint32}[w]
            refs.append(ref)
            widths.append(w)
            blocks.append(deltas.astype(dtype))
        return cls(np.array(refs, dtype=np.uint32), widths, blocks, v.size)

    def __len__(self) -> int:
        return self.length

    def get(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"position {i} out of range for length {self.length}")
        blk, off = divmod(i, PFOR_BLOCK)
        return int(self.references[blk]) + int(self.blocks[blk][off])

    def decompress(self) -> np.ndarray:
        parts = [
            block.astype(np.uint32) + ref
            for block, ref in zip(self.blocks, self.references)
        ]
        return np.concatenate(parts)

    def scan(self, pred: ScanPredicate, query: int) -> np.ndarray:
        return _positions(pred.evaluate(self.decompress(), query))

    def size_bytes(self) -> int:
        # 4-byte reference + 1-byte delta width per block, plus segment header
        per_block = sum(5 + block.nbytes for block in self.blocks)
        return per_block + GD_HEADER_BYTES

    def block_bytes(self, blk: int) -> bytes:
        """Encoded bytes of one block (reference, width, deltas)."""
        return (
            int(self.references[blk]).to_bytes(4, "little")
            + bytes([self.widths[blk]])
            + self.blocks[blk].tobytes()
        )


class HeavySegment:
    """Whole segment deflate-compressed as a single blob."""

    supports_random_access = False

    def __init__(self, blob: bytes, length: int):
        self.blob = blob
        self.length = length
        self.decompress_count = 0

    @classmethod
    def encode(cls, values) -> "HeavySegment":
        v = as_u32(values)
        if v.size == 0:
            raise ValueError("cannot encode an empty segment")
        return cls(zlib.compress(v.astype("<u4").tobytes()), v.size)

    def __len__(self) -> int:
        return self.length

    def get(self, i: int) -> int:
        raise RandomAccessUnsupported(
            "HeavySegment has no per-element access; decompress() instead"
        )

    def decompress(self) -> np.ndarray:
        self.decompress_count += 1
        try:
            raw = zlib.decompress(self.blob)
        except zlib.error as exc:
            raise ValueError(f"corrupt compressed segment blob: {exc}") from exc
        out = np.frombuffer(raw, dtype="<u4")
        if out.size != self.length:
            raise ValueError(
                f"corrupt compressed segment blob: {out.size} values, expected {self.length}"
            )
        return out.astype(np.uint32)

    def scan(self, pred: ScanPredicate, query: int) -> np.ndarray:
        return _positions(pred.evaluate(self.decompress(), query))

    def size_bytes(self) -> int:
        return len(self.blob) + GD_HEADER_BYTES


class UncompressedSegment:
    """Raw value array; the do-nothing reference encoder."""

    supports_random_access = True

    def __init__(self, values: np.ndarray):
        self.values = values
        self.length = values.size

    @classmethod
    def encode(cls, values) -> "UncompressedSegment":
        v = as_u32(values)
        if v.size == 0:
            raise ValueError("cannot encode an empty segment")
        return cls(v.copy())

    def __len__(self) -> int:
        return self.length

    def get(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"position {i} out of range for length {self.length}")
        return int(self.values[i])

    def decompress(self) -> np.ndarray:
        return self.values

    def scan(self, pred: ScanPredicate, query: int) -> np.ndarray:
        return _positions(pred.evaluate(self.values, query))

    def size_bytes(self) -> int:
        return self.values.size * 4
