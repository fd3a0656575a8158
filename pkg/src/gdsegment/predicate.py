"""Comparison predicates supported by table scans."""

from __future__ import annotations

import enum

import numpy as np


class ScanPredicate(enum.Enum):
    EQUALS = "equals"
    NOT_EQUALS = "not_equals"
    GREATER = "greater"
    GREATER_EQUALS = "greater_equals"
    LESS = "less"
    LESS_EQUALS = "less_equals"

    def evaluate(self, values: np.ndarray, query: int) -> np.ndarray:
        """Element-wise truth of ``value <op> query``."""
        v = np.asarray(values)
        q = v.dtype.type(query) if v.size else query
        if self is ScanPredicate.EQUALS:
            return v == q
        if self is ScanPredicate.NOT_EQUALS:
            return v != q
        if self is ScanPredicate.GREATER:
            return v > q
        if self is ScanPredicate.GREATER_EQUALS:
            return v >= q
        if self is ScanPredicate.LESS:
            return v < q
        return v <= q


ALL_PREDICATES = tuple(ScanPredicate)
