from __future__ import annotations

import json
import threading

import numpy as np
import pytest

from gdsegment.predicate import ScanPredicate
from gdsegment.profiler import DiagnosticsTable, MetricsRow
from gdsegment.selector import (
    EncodingDecision,
    Preset,
    UsageStats,
    WeightVector,
    advise,
    load_weights_file,
    normalize,
    parse_weights_config,
    select_best,
    weights_from_usage,
)


def make_table(rows):
    return DiagnosticsTable(
        dataset_id="t",
        rows=[MetricsRow(cid, dev, g, s, r, sc) for cid, dev, g, s, r, sc in rows],
    )


def test_weight_vector_validation():
    WeightVector(0.25, 0.25, 0.25, 0.25)
    with pytest.raises(ValueError):
        WeightVector(0.5, 0.5, 0.5, -0.5)
    with pytest.raises(ValueError):
        WeightVector(0.5, 0.5, 0.5, 0.5)


def test_presets():
    assert Preset.MC.weights == WeightVector(1, 0, 0, 0)
    assert Preset.EQ.weights == WeightVector(0.25, 0.25, 0.25, 0.25)
    for preset in Preset:
        w = preset.weights
        assert abs(sum(w.as_array()) - 1) < 1e-9


def test_normalize_gain_column():
    table = make_table([
        ("a", 1, 2.0, 1, 1, 1),
        ("b", 2, 27.0, 1, 1, 1),
        ("c", 3, 39.0, 1, 1, 1),
    ])
    scores = normalize(table)
    assert np.allclose(scores[:, 0], [0.0, 25 / 37, 1.0])
    assert np.all(scores[:, 1:] == 1.0)  # constant columns map to 1


def test_normalize_inverts_time_columns():
    table = make_table([("a", 1, 50, 8, 8, 8), ("b", 2, 50, 16, 16, 16)])
    scores = normalize(table)
    assert np.all(scores[:, 0] == 1.0)
    assert np.allclose(scores[0, 1:], 1.0)
    assert np.allclose(scores[1, 1:], 0.0)


def test_normalize_empty_table():
    with pytest.raises(ValueError):
        normalize(DiagnosticsTable("x", []))


def test_mc_equals_argmax_gain():
    rng = np.random.default_rng(1)
    for _ in range(200):
        rows = [
            (f"gd1:n={i}", i, float(g), float(s), float(r), float(sc))
            for i, (g, s, r, sc) in enumerate(
                zip(
                    rng.uniform(-50, 90, 8),
                    rng.uniform(1, 100, 8),
                    rng.uniform(1, 100, 8),
                    rng.uniform(1, 500, 8),
                ),
                start=1,
            )
        ]
        table = make_table(rows)
        best = select_best(table, Preset.MC.weights)
        gains = [r.gain_pct for r in table.rows]
        assert best.gain_pct == max(gains)


def test_tie_breaks_prefer_smaller_dev_size():
    table = make_table([
        ("gd1:n=9", 9, 50.0, 10.0, 10.0, 10.0),
        ("gd1:n=4", 4, 50.0, 10.0, 10.0, 10.0),
        ("gd1:n=7", 7, 50.0, 10.0, 10.0, 10.0),
    ])
    assert select_best(table, Preset.EQ.weights).dev_size == 4


def test_tie_breaks_encoder_priority():
    table = make_table([
        ("heavy", None, 50.0, 10.0, 10.0, 10.0),
        ("dictionary", None, 50.0, 10.0, 10.0, 10.0),
        ("pfor", None, 50.0, 10.0, 10.0, 10.0),
    ])
    assert select_best(table, Preset.MC.weights).config_id == "pfor"


def test_scale_invariance():
    rng = np.random.default_rng(2)
    weights = WeightVector(0.4, 0.2, 0.2, 0.2)
    for _ in range(100):
        table = make_table([
            (f"gd1:n={i}", i, float(rng.uniform(0, 90)), float(rng.uniform(1, 50)),
             float(rng.uniform(1, 50)), float(rng.uniform(1, 50)))
            for i in range(1, 7)
        ])
        chosen = select_best(table, weights).config_id
        factor = float(rng.uniform(0.1, 40))
        scaled = make_table([
            (r.config_id, r.dev_size, r.gain_pct, r.seq_ns * factor, r.rand_ns * factor, r.scan_us)
            for r in table.rows
        ])
        assert select_best(scaled, weights).config_id == chosen


def test_monotonicity_improving_winner_keeps_it():
    rng = np.random.default_rng(3)
    weights = Preset.EQ.weights
    for _ in range(100):
        table = make_table([
            (f"gd1:n={i}", i, float(rng.uniform(0, 90)), float(rng.uniform(1, 50)),
             float(rng.uniform(1, 50)), float(rng.uniform(1, 50)))
            for i in range(1, 7)
        ])
        best = select_best(table, weights)
        improved = make_table([
            (
                r.config_id,
                r.dev_size,
                r.gain_pct + (10.0 if r.config_id == best.config_id else 0.0),
                r.seq_ns,
                r.rand_ns,
                r.scan_us,
            )
            for r in table.rows
        ])
        assert select_best(improved, weights).config_id == best.config_id


def test_determinism_same_table_same_choice():
    table = make_table([
        ("gd1:n=1", 1, 10.0, 5.0, 5.0, 5.0),
        ("gd1:n=2", 2, 10.0, 5.0, 5.0, 5.0),
    ])
    picks = {select_best(table, Preset.EQ.weights).config_id for _ in range(10)}
    assert picks == {"gd1:n=1"}


def test_weights_from_usage_proportional():
    stats = UsageStats(seq_accesses=100, rand_accesses=100)
    w = weights_from_usage(stats, compression_floor=0.2)
    assert w == WeightVector(0.2, 0.4, 0.4, 0.0)

    stats = UsageStats()
    for _ in range(300):
        stats.note_scan(ScanPredicate.EQUALS)
    w = weights_from_usage(stats, compression_floor=0.2)
    assert w == WeightVector(0.2, 0.0, 0.0, 0.8)


def test_weights_from_usage_zero_falls_back_to_eq():
    assert weights_from_usage(UsageStats(), 0.25) == Preset.EQ.weights


def test_weights_from_usage_bad_floor():
    with pytest.raises(ValueError):
        weights_from_usage(UsageStats(), -0.1)
    with pytest.raises(ValueError):
        weights_from_usage(UsageStats(), 1.5)


def test_usage_stats_concurrent_increments():
    stats = UsageStats()

    def bump():
        for _ in range(1000):
            stats.note_sequential()
            stats.note_scan(ScanPredicate.LESS)

    threads = [threading.Thread(target=bump) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert stats.seq_accesses == 8000
    assert stats.scan_counts[ScanPredicate.LESS] == 8000


def test_usage_stats_json_roundtrip():
    stats = UsageStats(seq_accesses=5, rand_accesses=7)
    stats.note_scan(ScanPredicate.GREATER, 3)
    doc = json.loads(json.dumps(stats.to_dict()))
    back = UsageStats.from_dict(doc)
    assert back.seq_accesses == 5
    assert back.rand_accesses == 7
    assert back.scan_counts[ScanPredicate.GREATER] == 3


SCAN_FAST = ("scanny", None, 10.0, 100.0, 100.0, 10.0)
ACCESS_FAST = ("accessy", None, 10.0, 10.0, 10.0, 100.0)


def test_advise_current_best_means_no_reencode():
    table = make_table([SCAN_FAST, ACCESS_FAST])
    stats = UsageStats()
    stats.note_scan(ScanPredicate.EQUALS, 1000)
    decision = advise(table.row("scanny"), table, stats, threshold=0.0)
    assert decision.config_id == "scanny"
    assert decision.gain_over_current == 0.0
    assert not decision.reencode


def test_advise_strictly_better_candidate_triggers():
    table = make_table([SCAN_FAST, ACCESS_FAST])
    stats = UsageStats()
    stats.note_scan(ScanPredicate.EQUALS, 1000)
    decision = advise(table.row("accessy"), table, stats, threshold=0.0)
    assert decision.config_id == "scanny"
    assert decision.gain_over_current > 0
    assert decision.reencode


def test_advise_flips_with_usage_shift():
    table = make_table([SCAN_FAST, ACCESS_FAST])
    scan_heavy = UsageStats()
    scan_heavy.note_scan(ScanPredicate.EQUALS, 1000)
    access_heavy = UsageStats(seq_accesses=500, rand_accesses=500)
    current = table.row("scanny")
    assert not advise(current, table, scan_heavy, threshold=0.0).reencode
    flipped = advise(current, table, access_heavy, threshold=0.0)
    assert flipped.reencode
    assert flipped.config_id == "accessy"


def test_advise_threshold_blocks_small_gains():
    table = make_table([SCAN_FAST, ACCESS_FAST])
    stats = UsageStats()
    stats.note_scan(ScanPredicate.EQUALS, 1000)
    decision = advise(table.row("accessy"), table, stats, threshold=10.0)
    assert not decision.reencode


def test_advise_empty_candidates():
    with pytest.raises(ValueError):
        advise(
            MetricsRow("x", None, 1, 1, 1, 1),
            DiagnosticsTable("t", []),
            UsageStats(),
        )


def test_advise_current_outside_table():
    table = make_table([SCAN_FAST])
    outsider = MetricsRow("old", None, 5.0, 200.0, 200.0, 200.0)
    stats = UsageStats(seq_accesses=10)
    decision = advise(outsider, table, stats, threshold=0.0)
    assert decision.config_id == "scanny"
    assert decision.reencode


def test_weights_config_parsing(tmp_path):
    assert parse_weights_config({"preset": "mc"}) == Preset.MC.weights
    explicit = parse_weights_config(
        {"weights": {"compression": 0.1, "seq": 0.2, "rand": 0.3, "scan": 0.4}}
    )
    assert explicit == WeightVector(0.1, 0.2, 0.3, 0.4)
    with pytest.raises(ValueError):
        parse_weights_config({})
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"preset": "em"}))
    assert load_weights_file(path) == Preset.EM.weights


def test_encoding_decision_shape():
    d = EncodingDecision("gd1:n=3", 0.9, 0.1, True)
    assert d.reencode and d.config_id == "gd1:n=3"
