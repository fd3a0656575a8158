"""Segment encoders built on the LastBit base/deviation transform.

Four layouts trade compression against access and scan speed:

* ``GdSegment1`` stores one deviation and one base index per value.
* ``GdSegment2`` deduplicates deviations and packs (base index, deviation
  index) pairs into a single reconstruction list.
* ``GdSegment3`` groups the deduplicated deviations by base so deviation
  indexes only need to address the (shorter) per-base lists.
* ``GdSegment4`` keeps deviations sorted per base together with the original
  positions, which makes scans a couple of binary searches but gives up
  constant-time random access.

All four answer table scans without reconstructing a single value: the
query is split with the same transform, the sorted base list is binary
searched, every non-query base range is classified as fully inside or
outside the result, and only the query base's deviations are compared.
"""

from __future__ import annotations

import numpy as np

from .bitvec import PackedVector, min_width, pack
from .lastbit import VALUE_BITS, check_dev_size, merge_array, split
from .predicate import ScanPredicate


class RandomAccessUnsupported(Exception):
    """Raised when positional access is requested from a layout without it."""


def as_u32(values) -> np.ndarray:
    """Validate and convert input to a 1-D uint32 array."""
    v = np.asarray(values)
    if v.ndim != 1:
        raise ValueError("segment values must be one-dimensional")
    if v.size:
        v64 = v.astype(np.int64) if v.dtype.kind in "iu" else np.asarray(v, dtype=np.int64)
        if v64.min() < 0 or v64.max() > 0xFFFFFFFF:
            raise ValueError("segment values must be unsigned 32-bit integers")
    return v.astype(np.uint32)


def _dev_index_ranges(pred: ScanPredicate, lo: int, hi: int, count: int) -> list[tuple[int, int]]:
    """Half-open index ranges matching ``pred`` in a sorted deviation list.

    ``lo``/``hi`` are the lower/upper insertion points of the query deviation.
    """
    if pred is ScanPredicate.EQUALS:
        return [(lo, hi)]
    if pred is ScanPredicate.NOT_EQUALS:
        return [(0, lo), (hi, count)]
    if pred is ScanPredicate.GREATER:
        return [(hi, count)]
    if pred is ScanPredicate.GREATER_EQUALS:
        return [(lo, count)]
    if pred is ScanPredicate.LESS:
        return [(0, lo)]
    return [(0, hi)]


class _GdSegmentBase:
    """State and scan plumbing shared by the four layouts."""

    variant: int
    supports_random_access = True

    def __init__(self, n: int, length: int, bases: PackedVector):
        self.n = n
        self.length = length
        self.bases = bases

    def __len__(self) -> int:
        return self.length

    def _split_query(self, query: int) -> tuple[int, int, int, bool]:
        qb, qd = split(int(query), self.n)
        pos = self.bases.searchsorted(qb)
        present = pos < len(self.bases) and self.bases.read(pos) == qb
        return qb, qd, pos, present

    def _base_interval(self, pred: ScanPredicate, pos: int, present: bool) -> tuple[int, int]:
        """Base-index range whose whole regions satisfy ``pred``."""
        nb = len(self.bases)
        if pred in (ScanPredicate.GREATER, ScanPredicate.GREATER_EQUALS):
            return pos + (1 if present else 0), nb
        if pred in (ScanPredicate.LESS, ScanPredicate.LESS_EQUALS):
            return 0, pos
        return 0, 0  # EQUALS; NOT_EQUALS handled separately

    def _vectors(self) -> list[tuple[str, PackedVector]]:
        raise NotImplementedError

    def size_bytes(self) -> int:
        """Payload bytes of every packed list plus 8 header bytes per list."""
        return sum(pv.size_bytes + 8 for _, pv in self._vectors())

    def payload_reads(self) -> int:
        return sum(pv.read_count for _, pv in self._vectors())

    def describe(self) -> list[dict]:
        rows = []
        for name, pv in self._vectors():
            row = {
                "list": name,
                "width_bits": pv.width,
                "length": pv.length,
                "payload_bytes": pv.size_bytes,
            }
            if pv.length:
                row["first"] = pv.read(0)
                row["last"] = pv.read(pv.length - 1)
            rows.append(row)
        return rows

    def get(self, i: int) -> int:
        raise NotImplementedError

    def decompress(self) -> np.ndarray:
        raise NotImplementedError

    def scan(self, pred: ScanPredicate, query: int) -> np.ndarray:
        raise NotImplementedError

    def _check_pos(self, i: int) -> None:
        if not 0 <= i < self.length:
            raise IndexError(f"position {i} out of range for length {self.length}")


class _IndexListSegment(_GdSegmentBase):
    """Scan logic for layouts that keep a per-position base-index list."""

    def _base_index_array(self) -> np.ndarray:
        raise NotImplementedError

    def _query_base_hits(self, pred, qd, pos, bi):
        """Boolean mask (aligned with ``bi == pos``) of deviation matches."""
        raise NotImplementedError

    def scan(self, pred: ScanPredicate, query: int) -> np.ndarray:
        _, qd, pos, present = self._split_query(query)
        bi = self._base_index_array()
        if pred is ScanPredicate.NOT_EQUALS:
            mask = bi != pos if present else np.ones(self.length, dtype=bool)
        else:
            lo, hi = self._base_interval(pred, pos, present)
            mask = (bi >= lo) & (bi < hi) if lo < hi else np.zeros(self.length, dtype=bool)
        if present:
            mask |= (bi == pos) & self._query_base_hits(pred, qd, pos, bi)
        return np.nonzero(mask)[0]


GD_HEADER_BYTES = 8  # width + length descriptor per packed list


class GdSegment1(_IndexListSegment):
    """Plain layout: per-value deviation and base index, original order."""

    variant = 1

    def __init__(self, n, length, bases, deviations, base_indexes):
        super().__init__(n, length, bases)
        self.deviations = deviations
        self.base_indexes = base_indexes

    @classmethod
    def encode(cls, values, n: int) -> "GdSegment1":
        v, devs, bases_u, inv = _split_values(values, n)
        return cls(
            n,
            v.size,
            pack(bases_u, VALUE_BITS - n),
            pack(devs, n),
            pack(inv, min_width(bases_u.size - 1)),
        )

    def _vectors(self):
        return [
            ("bases", self.bases),
            ("deviations", self.deviations),
            ("base_indexes", self.base_indexes),
        ]

    def get(self, i: int) -> int:
        self._check_pos(i)
        bi = self.base_indexes.read(i)
        return (self.bases.read(bi) << self.n) | self.deviations.read(i)

    def decompress(self) -> np.ndarray:
        basevals = self.bases.to_array()
        bi = self.base_indexes.to_array()
        return merge_array(basevals[bi], self.deviations.to_array(), self.n)

    def _base_index_array(self):
        return self.base_indexes.gather(np.arange(self.length, dtype=np.int64))

    def _query_base_hits(self, pred, qd, pos, bi):
        return pred.evaluate(self.deviations.to_array(), qd)


class GdSegment2(_IndexListSegment):
    """Deduplicated deviations; (base index, deviation index) packed pairs."""

    variant = 2

    def __init__(self, n, length, bases, unique_devs, recon, dev_bits):
        super().__init__(n, length, bases)
        self.unique_devs = unique_devs
        self.recon = recon
        self._dev_bits = dev_bits

    @classmethod
    def encode(cls, values, n: int) -> "GdSegment2":
        v, devs, bases_u, inv = _split_values(values, n)
        devs_u, dinv = np.unique(devs, return_inverse=True)
        bw = min_width(bases_u.size - 1)
        dw = min_width(devs_u.size - 1)
        pairs = (inv.astype(np.uint64) << np.uint64(dw)) | dinv.astype(np.uint64)
        return cls(
            n,
            v.size,
            pack(bases_u, VALUE_BITS - n),
            pack(devs_u, n),
            pack(pairs, bw + dw),
            dw,
        )

    def _vectors(self):
        return [
            ("bases", self.bases),
            ("unique_devs", self.unique_devs),
            ("recon", self.recon),
        ]

    def _unpack(self, packed: int) -> tuple[int, int]:
        return packed >> self._dev_bits, packed & ((1 << self._dev_bits) - 1)

    def get(self, i: int) -> int:
        self._check_pos(i)
        bi, di = self._unpack(self.recon.read(i))
        return (self.bases.read(bi) << self.n) | self.unique_devs.read(di)

    def decompress(self) -> np.ndarray:
        r = self.recon.to_array()
        bi = r >> np.uint32(self._dev_bits)
        di = r & np.uint32((1 << self._dev_bits) - 1)
        return merge_array(self.bases.to_array()[bi], self.unique_devs.to_array()[di], self.n)

    def scan(self, pred: ScanPredicate, query: int) -> np.ndarray:
        _, qd, pos, present = self._split_query(query)
        r = self.recon.gather(np.arange(self.length, dtype=np.int64))
        bi = r >> np.uint32(self._dev_bits)
        if pred is ScanPredicate.NOT_EQUALS:
            mask = bi != pos if present else np.ones(self.length, dtype=bool)
        else:
            lo, hi = self._base_interval(pred, pos, present)
            mask = (bi >= lo) & (bi < hi) if lo < hi else np.zeros(self.length, dtype=bool)
        if present:
            di = r & np.uint32((1 << self._dev_bits) - 1)
            dlo = self.unique_devs.searchsorted(qd, "left")
            dhi = self.unique_devs.searchsorted(qd, "right")
            ok = np.zeros(self.length, dtype=bool)
            for a, b in _dev_index_ranges(pred, dlo, dhi, len(self.unique_devs)):
                if a < b:
                    ok |= (di >= a) & (di < b)
            mask |= (bi == pos) & ok
        return np.nonzero(mask)[0]


class GdSegment3(_IndexListSegment):
    """Deviations deduplicated per base; indexes address the local lists.

    The local lists live concatenated in one packed vector; ``local_offsets``
    holds each base's start (addressing metadata, so random access still
    costs four payload reads).
    """

    variant = 3

    def __init__(self, n, length, bases, local_devs, local_offsets, base_indexes, local_dev_indexes):
        super().__init__(n, length, bases)
        self.local_devs = local_devs
        self.local_offsets = local_offsets
        self.base_indexes = base_indexes
        self.local_dev_indexes = local_dev_indexes
        self._starts = local_offsets.to_array().astype(np.int64)
        local_offsets.read_count = 0

    @classmethod
    def encode(cls, values, n: int) -> "GdSegment3":
        v, devs, bases_u, inv = _split_values(values, n)
        nb = bases_u.size
        order = np.argsort(v, kind="stable")
        bs = inv[order]
        ds = devs[order]
        counts = np.bincount(bs, minlength=nb)
        group_starts = np.concatenate(([0], np.cumsum(counts)))
        newpair = np.ones(v.size, dtype=bool)
        newpair[1:] = (ds[1:] != ds[:-1]) | (bs[1:] != bs[:-1])
        uid = np.cumsum(newpair) - 1
        first_uid = uid[group_starts[:-1]]
        local_sorted = uid - np.repeat(first_uid, counts)
        dev_flat = ds[newpair]
        starts_flat = np.concatenate((first_uid, [dev_flat.size]))
        ldi = np.empty(v.size, dtype=np.int64)
        ldi[order] = local_sorted
        bi = np.empty(v.size, dtype=np.int64)
        bi[order] = bs
        max_local = int((starts_flat[1:] - starts_flat[:-1]).max())
        return cls(
            n,
            v.size,
            pack(bases_u, VALUE_BITS - n),
            pack(dev_flat, n),
            pack(starts_flat, min_width(int(dev_flat.size))),
            pack(bi, min_width(nb - 1)),
            pack(ldi, min_width(max_local - 1)),
        )

    def _vectors(self):
        return [
            ("bases", self.bases),
            ("local_unique_devs", self.local_devs),
            ("local_offsets", self.local_offsets),
            ("base_indexes", self.base_indexes),
            ("local_dev_indexes", self.local_dev_indexes),
        ]

    def local_list(self, base_index: int) -> np.ndarray:
        """Sorted deduplicated deviations belonging to one base."""
        s, e = int(self._starts[base_index]), int(self._starts[base_index + 1])
        return self.local_devs.gather(np.arange(s, e, dtype=np.int64))

    def get(self, i: int) -> int:
        self._check_pos(i)
        bi = self.base_indexes.read(i)
        ldi = self.local_dev_indexes.read(i)
        dev = self.local_devs.read(int(self._starts[bi]) + ldi)
        return (self.bases.read(bi) << self.n) | dev

    def decompress(self) -> np.ndarray:
        bi = self.base_indexes.to_array()
        ldi = self.local_dev_indexes.to_array()
        dev = self.local_devs.to_array()[self._starts[bi] + ldi]
        return merge_array(self.bases.to_array()[bi], dev, self.n)

    def _base_index_array(self):
        return self.base_indexes.gather(np.arange(self.length, dtype=np.int64))

    def _query_base_hits(self, pred, qd, pos, bi):
        s, e = int(self._starts[pos]), int(self._starts[pos + 1])
        dlo = self.local_devs.searchsorted(qd, "left", s, e) - s
        dhi = self.local_devs.searchsorted(qd, "right", s, e) - s
        ldi = self.local_dev_indexes.gather(np.arange(self.length, dtype=np.int64))
        ok = np.zeros(self.length, dtype=bool)
        for a, b in _dev_index_ranges(pred, dlo, dhi, e - s):
            if a < b:
                ok |= (ldi >= a) & (ldi < b)
        return ok


class GdSegment4(_GdSegmentBase):
    """Scan-optimized layout: per-base sorted deviations with original
    positions alongside. Not randomly accessible."""

    variant = 4
    supports_random_access = False

    def __init__(self, n, length, bases, devs, chunk_offsets, group_offsets):
        super().__init__(n, length, bases)
        self.devs = devs
        self.chunk_offsets = chunk_offsets
        self.group_offsets = group_offsets
        self._starts = group_offsets.to_array().astype(np.int64)
        group_offsets.read_count = 0
        self.decompress_count = 0

    @classmethod
    def encode(cls, values, n: int) -> "GdSegment4":
        v, devs, bases_u, inv = _split_values(values, n)
        order = np.argsort(v, kind="stable")
        counts = np.bincount(inv[order], minlength=bases_u.size)
        starts = np.concatenate(([0], np.cumsum(counts)))
        return cls(
            n,
            v.size,
            pack(bases_u, VALUE_BITS - n),
            pack(devs[order], n),
            pack(order, min_width(v.size - 1)),
            pack(starts, min_width(v.size)),
        )

    def _vectors(self):
        return [
            ("bases", self.bases),
            ("devs", self.devs),
            ("chunk_offsets", self.chunk_offsets),
            ("group_offsets", self.group_offsets),
        ]

    def base_group(self, base_index: int) -> tuple[np.ndarray, np.ndarray]:
        """(sorted deviations, original positions) stored for one base."""
        s, e = int(self._starts[base_index]), int(self._starts[base_index + 1])
        span = np.arange(s, e, dtype=np.int64)
        return self.devs.gather(span), self.chunk_offsets.gather(span)

    def get(self, i: int) -> int:
        raise RandomAccessUnsupported(
            "GdSegment4 stores no reconstruction list; decompress() instead"
        )

    def decompress(self) -> np.ndarray:
        self.decompress_count += 1
        counts = np.diff(self._starts)
        basevals = np.repeat(self.bases.to_array(), counts)
        vals = merge_array(basevals, self.devs.to_array(), self.n)
        out = np.empty(self.length, dtype=np.uint32)
        out[self.chunk_offsets.to_array()] = vals
        return out

    def scan(self, pred: ScanPredicate, query: int) -> np.ndarray:
        _, qd, pos, present = self._split_query(query)
        starts = self._starts
        nb = len(self.bases)
        ranges: list[tuple[int, int]] = []
        if pred is ScanPredicate.NOT_EQUALS:
            if not present:
                return np.arange(self.length, dtype=np.int64)
            s, e = int(starts[pos]), int(starts[pos + 1])
            ranges += [(0, s), (e, int(starts[nb]))]
        elif pred is not ScanPredicate.EQUALS:
            lo, hi = self._base_interval(pred, pos, present)
            if lo < hi:
                ranges.append((int(starts[lo]), int(starts[hi])))
        if present:
            s, e = int(starts[pos]), int(starts[pos + 1])
            dlo = self.devs.searchsorted(qd, "left", s, e)
            dhi = self.devs.searchsorted(qd, "right", s, e)
            for a, b in _dev_index_ranges(pred, dlo - s, dhi - s, e - s):
                ranges.append((s + a, s + b))
        mask = np.zeros(self.length, dtype=bool)
        for a, b in ranges:
            if a < b:
                mask[self.chunk_offsets.gather(np.arange(a, b, dtype=np.int64))] = True
        return np.nonzero(mask)[0]


GD_VARIANTS = {1: GdSegment1, 2: GdSegment2, 3: GdSegment3, 4: GdSegment4}

GdSegment = GdSegment1 | GdSegment2 | GdSegment3 | GdSegment4


def gd_encode(variant: int, values, n: int) -> GdSegment:
    """Encode ``values`` with the requested layout and deviation size."""
    if variant not in GD_VARIANTS:
        raise ValueError(f"unknown segment variant {variant}; expected 1..4")
    return GD_VARIANTS[variant].encode(values, n)


def _split_values(values, n: int):
    check_dev_size(n)
    v = as_u32(values)
    if v.size == 0:
        raise ValueError("cannot encode an empty segment")
    devs = v & np.uint32((1 << n) - 1)
    bases_u, inv = np.unique(v >> np.uint32(n), return_inverse=True)
    return v, devs, bases_u, inv.astype(np.int64)
