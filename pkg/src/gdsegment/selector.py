"""Pick the best encoder configuration from a diagnostics table.

Metric columns are min-max normalized per table (time metrics inverted so
faster is higher), then combined as a weighted sum. Weights come from a
preset, a config file, or are inferred from per-segment usage counters; the
advisor compares the current configuration against the candidates and says
whether re-encoding is worth it.
"""

from __future__ import annotations

import enum
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .predicate import ScanPredicate
from .profiler import DiagnosticsTable, MetricsRow

WEIGHT_TOLERANCE = 1e-9

DEFAULT_COMPRESSION_FLOOR = 0.2
DEFAULT_REENCODE_THRESHOLD = 0.05


@dataclass(frozen=True)
class WeightVector:
    """Relative importance of compression and the three speed metrics."""

    compression: float
    seq: float
    rand: float
    scan: float

    def __post_init__(self):
        vals = (self.compression, self.seq, self.rand, self.scan)
        if any(v < 0 for v in vals):
            raise ValueError(f"weights must be non-negative: {vals}")
        if abs(sum(vals) - 1.0) > WEIGHT_TOLERANCE:
            raise ValueError(f"weights must sum to 1, got {sum(vals)}")

    def as_array(self) -> np.ndarray:
        return np.array([self.compression, self.seq, self.rand, self.scan])


class Preset(enum.Enum):
    """Canned weight distributions.

    MC cares only about size; EQ weighs everything equally; LM mirrors
    engines dominated by positional access; EM shifts the weight to scans.
    """

    MC = "mc"
    EQ = "eq"
    LM = "lm"
    EM = "em"

    @property
    def weights(self) -> WeightVector:
        return _PRESET_WEIGHTS[self]


_PRESET_WEIGHTS = {
    Preset.MC: WeightVector(1.0, 0.0, 0.0, 0.0),
    Preset.EQ: WeightVector(0.25, 0.25, 0.25, 0.25),
    Preset.LM: WeightVector(0.2, 0.3, 0.4, 0.1),
    Preset.EM: WeightVector(0.2, 0.1, 0.1, 0.6),
}


@dataclass
class UsageStats:
    """Per-segment operation counters; increments never lose updates."""

    seq_accesses: int = 0
    rand_accesses: int = 0
    scan_counts: dict[ScanPredicate, int] = field(
        default_factory=lambda: {p: 0 for p in ScanPredicate}
    )

    def __post_init__(self):
        self._lock = threading.Lock()

    def note_sequential(self, k: int = 1) -> None:
        with self._lock:
            self.seq_accesses += k

    def note_random(self, k: int = 1) -> None:
        with self._lock:
            self.rand_accesses += k

    def note_scan(self, pred: ScanPredicate, k: int = 1) -> None:
        with self._lock:
            self.scan_counts[pred] += k

    @property
    def total_scans(self) -> int:
        return sum(self.scan_counts.values())

    def to_dict(self) -> dict:
        return {
            "seq": self.seq_accesses,
            "rand": self.rand_accesses,
            "scans": {p.value: c for p, c in self.scan_counts.items()},
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "UsageStats":
        stats = cls(
            seq_accesses=int(doc.get("seq", 0)),
            rand_accesses=int(doc.get("rand", 0)),
        )
        for name, count in doc.get("scans", {}).items():
            stats.scan_counts[ScanPredicate(name)] = int(count)
        return stats


@dataclass
class EncodingDecision:
    config_id: str
    score: float
    gain_over_current: float
    reencode: bool


#: Tie-break order between encoders with identical scores (cheaper access
#: first); rows also prefer the smaller deviation size before this applies.
ENCODER_TIE_ORDER = ("uncompressed", "pfor", "dictionary", "gd1", "gd2", "gd3", "gd4", "heavy")

_METRIC_COUNT = 4


def normalize(table: DiagnosticsTable) -> np.ndarray:
    """Per-metric min-max scores in [0, 1], one row per table row.

    Column order: compression gain, sequential, random, scan. Time columns
    are inverted (lower time scores higher); a constant column maps to 1.
    """
    if not table.rows:
        raise ValueError("cannot normalize an empty diagnostics table")
    data = np.array(
        [[r.gain_pct, r.seq_ns, r.rand_ns, r.scan_us] for r in table.rows],
        dtype=float,
    )
    out = np.empty_like(data)
    for c in range(_METRIC_COUNT):
        col = data[:, c]
        span = col.max() - col.min()
        if span == 0:
            out[:, c] = 1.0
        else:
            scaled = (col - col.min()) / span
            out[:, c] = scaled if c == 0 else 1.0 - scaled
    return out


def _tie_key(row: MetricsRow) -> tuple:
    encoder = row.config_id.split(":", 1)[0]
    prio = ENCODER_TIE_ORDER.index(encoder) if encoder in ENCODER_TIE_ORDER else len(ENCODER_TIE_ORDER)
    return (row.dev_size if row.dev_size is not None else 0, prio, row.config_id)


def select_best(table: DiagnosticsTable, weights: WeightVector) -> MetricsRow:
    """Row with the highest weighted score; deterministic under ties.

    Exact score ties go to the smaller deviation size, then to the cheaper
    encoder per ``ENCODER_TIE_ORDER``.
    """
    scores = normalize(table) @ weights.as_array()
    best = 0
    for i in range(1, len(table.rows)):
        if scores[i] > scores[best] or (
            scores[i] == scores[best] and _tie_key(table.rows[i]) < _tie_key(table.rows[best])
        ):
            best = i
    return table.rows[best]


def weights_from_usage(stats: UsageStats, compression_floor: float = DEFAULT_COMPRESSION_FLOOR) -> WeightVector:
    """Speed weights proportional to observed operation counts.

    ``compression_floor`` reserves a fixed share for compression so a busy
    segment still counts size; with no recorded usage the split falls back
    to equal weights.
    """
    if not 0 <= compression_floor <= 1:
        raise ValueError(f"compression floor must be within [0, 1], got {compression_floor}")
    seq, rand, scans = stats.seq_accesses, stats.rand_accesses, stats.total_scans
    total = seq + rand + scans
    if total == 0:
        return Preset.EQ.weights
    budget = 1.0 - compression_floor
    return WeightVector(
        compression=compression_floor,
        seq=budget * seq / total,
        rand=budget * rand / total,
        scan=budget * scans / total,
    )


def advise(current: MetricsRow, candidates: DiagnosticsTable, stats: UsageStats,
           threshold: float = DEFAULT_REENCODE_THRESHOLD,
           compression_floor: float = DEFAULT_COMPRESSION_FLOOR) -> EncodingDecision:
    """Decide whether re-encoding to the best candidate is worth it.

    The current row and candidates are normalized together; the decision is
    to re-encode when the best score beats the current one by more than
    ``threshold``.
    """
    if not candidates.rows:
        raise ValueError("empty candidate table")
    weights = weights_from_usage(stats, compression_floor)
    rows = list(candidates.rows)
    ids = {r.config_id for r in rows}
    if current.config_id not in ids:
        rows = rows + [current]
    combined = DiagnosticsTable(dataset_id=candidates.dataset_id, rows=rows)
    scores = normalize(combined) @ weights.as_array()
    best = select_best(combined, weights)
    best_score = float(scores[rows.index(best)])
    current_idx = next(i for i, r in enumerate(rows) if r.config_id == current.config_id)
    delta = best_score - float(scores[current_idx])
    return EncodingDecision(
        config_id=best.config_id,
        score=best_score,
        gain_over_current=delta,
        reencode=delta > threshold,
    )


def parse_weights_config(doc: dict) -> WeightVector:
    """Weight configuration: ``{"preset": name}`` or explicit weights."""
    if "preset" in doc:
        return Preset(str(doc["preset"]).lower()).weights
    if "weights" in doc:
        w = doc["weights"]
        return WeightVector(
            compression=float(w["compression"]),
            seq=float(w["seq"]),
            rand=float(w["rand"]),
            scan=float(w["scan"]),
        )
    raise ValueError("weight config needs a 'preset' or 'weights' entry")


def load_weights_file(path: str | Path) -> WeightVector:
    return parse_weights_config(json.loads(Path(path).read_text()))
