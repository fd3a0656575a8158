from __future__ import annotations

import numpy as np
import pytest

from gdsegment.datagen import (
    DatasetKind,
    DatasetSpec,
    generate,
    read_values,
    write_values,
)


def test_primary_key_example():
    assert list(generate(DatasetSpec(DatasetKind.PRIMARY_KEY, 5))) == [1, 2, 3, 4, 5]


def test_sorted_equidistant_example():
    assert list(generate(DatasetSpec(DatasetKind.SORTED_EQUIDISTANT, 4))) == [0, 5, 10, 15]


def test_determinism():
    for kind in DatasetKind:
        a = generate(DatasetSpec(kind, 4000, seed=123))
        b = generate(DatasetSpec(kind, 4000, seed=123))
        assert np.array_equal(a, b), kind
    a = generate(DatasetSpec(DatasetKind.MONTHS, 4000, seed=1))
    b = generate(DatasetSpec(DatasetKind.MONTHS, 4000, seed=2))
    assert not np.array_equal(a, b)


def test_value_ranges():
    months = generate(DatasetSpec(DatasetKind.MONTHS, 20000, seed=5))
    assert months.min() >= 1 and months.max() <= 12
    years = generate(DatasetSpec(DatasetKind.YEARS, 20000, seed=5))
    assert years.min() >= 1900 and years.max() <= 2100
    uniform = generate(DatasetSpec(DatasetKind.UNIFORM_RANDOM, 20000, seed=5))
    assert uniform.dtype == np.uint32
    ts = generate(DatasetSpec(DatasetKind.TIME_SERIES, 20000, seed=5))
    assert ts[0] == 10**6


def test_monotonic_kinds():
    for kind in (DatasetKind.PRIMARY_KEY, DatasetKind.SORTED_EQUIDISTANT):
        values = generate(DatasetSpec(kind, 10000))
        assert np.all(np.diff(values.astype(np.int64)) > 0)


def test_zero_length_rejected():
    with pytest.raises(ValueError):
        generate(DatasetSpec(DatasetKind.MONTHS, 0))


def test_time_series_step_bounds():
    ts = generate(DatasetSpec(DatasetKind.TIME_SERIES, 50000, seed=9)).astype(np.int64)
    steps = np.diff(ts)
    assert steps.min() >= -256
    assert steps.max() <= 512


def test_file_roundtrip(tmp_path):
    values = generate(DatasetSpec(DatasetKind.YEARS, 1000, seed=3))
    path = tmp_path / "years.bin"
    write_values(path, values)
    assert path.stat().st_size == 4000
    back = read_values(path)
    assert np.array_equal(back, values)
    # raw little-endian layout, no header
    assert path.read_bytes()[:4] == int(values[0]).to_bytes(4, "little")


def test_read_rejects_bad_files(tmp_path):
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"\x01\x02\x03")
    with pytest.raises(ValueError):
        read_values(bad)
    empty = tmp_path / "empty.bin"
    empty.write_bytes(b"")
    with pytest.raises(ValueError):
        read_values(empty)
