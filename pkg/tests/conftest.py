from __future__ import annotations

import operator

import numpy as np
import pytest

from gdsegment.datagen import DatasetKind, DatasetSpec, generate
from gdsegment.predicate import ScanPredicate

DATASET_SEED = 7
SEGMENT_LENGTH = 65535

# Independent comparison table for scan oracles; kept separate from the
# library's predicate dispatch on purpose.
ORACLE_OPS = {
    ScanPredicate.EQUALS: operator.eq,
    ScanPredicate.NOT_EQUALS: operator.ne,
    ScanPredicate.GREATER: operator.gt,
    ScanPredicate.GREATER_EQUALS: operator.ge,
    ScanPredicate.LESS: operator.lt,
    ScanPredicate.LESS_EQUALS: operator.le,
}


def oracle_scan(raw: np.ndarray, pred: ScanPredicate, query: int) -> np.ndarray:
    """Brute-force position list over the raw values."""
    return np.nonzero(ORACLE_OPS[pred](raw.astype(np.int64), int(query)))[0]


@pytest.fixture(scope="session")
def datasets() -> dict[DatasetKind, np.ndarray]:
    """The six synthetic datasets at full segment length, fixed seed."""
    return {
        kind: generate(DatasetSpec(kind, SEGMENT_LENGTH, DATASET_SEED))
        for kind in DatasetKind
    }


@pytest.fixture(scope="session")
def small_datasets() -> dict[DatasetKind, np.ndarray]:
    """Shorter cuts of every dataset kind for cheap exhaustive checks."""
    return {
        kind: generate(DatasetSpec(kind, 2500, DATASET_SEED))
        for kind in DatasetKind
    }
