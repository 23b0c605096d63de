"""Pairwise clustering metrics and the benchmark harness.

Precision/recall/F1 are computed over unordered object pairs from a label
contingency table (never by enumerating the n^2 pairs); unassigned objects
are treated as singletons so every lost pair costs a false negative.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .clustering import UNASSIGNED, Clustering
from .dataset import Dataset
from .errors import UsageError


@dataclass(frozen=True)
class PairConfusion:
    tp: int
    fp: int
    fn: int


def _effective_labels(labels: np.ndarray) -> np.ndarray:
    """Remap so each unassigned object is its own singleton cluster."""
    labels = np.asarray(labels, dtype=np.int64)
    out = labels.copy()
    orphans = np.nonzero(labels == UNASSIGNED)[0]
    if orphans.size:
        base = labels.max(initial=0) + 1
        out[orphans] = base + np.arange(orphans.size)
    return out


def _labels_of(c) -> np.ndarray:
    return c.labels if isinstance(c, Clustering) else np.asarray(c, dtype=np.int64)


def _pairs_within(counts: np.ndarray) -> int:
    counts = counts.astype(np.int64)
    return int((counts * (counts - 1) // 2).sum())


def pair_confusion(c, g) -> PairConfusion:
    """TP/FP/FN over unordered pairs via the label contingency table."""
    lc = _effective_labels(_labels_of(c))
    lg = _effective_labels(_labels_of(g))
    if lc.shape[0] != lg.shape[0]:
        raise UsageError("clusterings cover different object universes")
    cells = np.unique(np.stack([lc, lg]), axis=1, return_counts=True)[1]
    tp = _pairs_within(cells)
    pairs_c = _pairs_within(np.unique(lc, return_counts=True)[1])
    pairs_g = _pairs_within(np.unique(lg, return_counts=True)[1])
    return PairConfusion(tp=tp, fp=pairs_c - tp, fn=pairs_g - tp)


def pair_metrics(c, g) -> tuple[float, float, float]:
    """(precision, recall, f1); 0/0 ratios are 0 unless both clusterings
    have no same-cluster pairs at all, which scores a perfect 1."""
    pc = pair_confusion(c, g)
    if pc.tp == 0 and pc.fp == 0 and pc.fn == 0:
        return 1.0, 1.0, 1.0
    precision = pc.tp / (pc.tp + pc.fp) if pc.tp + pc.fp else 0.0
    recall = pc.tp / (pc.tp + pc.fn) if pc.tp + pc.fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


# --- benchmark harness ------------------------------------------------------


@dataclass
class BenchReport:
    index: str
    n: int
    d: int
    dc: float
    build_seconds: float = 0.0
    rho_seconds: float = 0.0
    delta_seconds: float = 0.0
    index_bytes: int = 0
    profile_hash: str = ""
    params: dict = field(default_factory=dict)
    error: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "n": self.n,
            "d": self.d,
            "dc": self.dc,
            "build_seconds": self.build_seconds,
            "rho_seconds": self.rho_seconds,
            "delta_seconds": self.delta_seconds,
            "index_bytes": self.index_bytes,
            "profile_hash": self.profile_hash,
            "params": self.params,
            "error": self.error,
        }


def _median_time(fn, repeats: int = 3):
    """One discarded warm-up, then the median wall time of `repeats` runs."""
    fn()
    times = []
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times)), result


def bench_backend(ds: Dataset, name: str, dc: float, **params) -> BenchReport:
    from .backends import build_backend  # local import to avoid a cycle

    report = BenchReport(index=name, n=ds.n, d=ds.dim, dc=dc, params=dict(params))
    try:
        t0 = time.perf_counter()
        backend = build_backend(name, ds, **params)
        report.build_seconds = time.perf_counter() - t0
        report.index_bytes = backend.estimated_bytes()
        report.rho_seconds, rho = _median_time(lambda: backend.compute_rho(dc))
        report.delta_seconds, rest = _median_time(lambda: backend.compute_delta(dc, rho))
        profile = backend.assemble_profile(dc, rho, rest)
        report.profile_hash = profile.content_hash()
    except MemoryError:
        report.error = "out of memory"
    return report


def bench_suite(ds: Dataset, dc: float, names, **params) -> list[BenchReport]:
    return [bench_backend(ds, name, dc, **params) for name in names]


def format_table(reports: list[BenchReport]) -> str:
    cols = ["index", "n", "build_s", "rho_s", "delta_s", "bytes", "hash", "error"]
    rows = [cols]
    for r in reports:
        rows.append([
            r.index,
            str(r.n),
            f"{r.build_seconds:.4f}",
            f"{r.rho_seconds:.4f}",
            f"{r.delta_seconds:.4f}",
            str(r.index_bytes),
            r.profile_hash[:12] if r.profile_hash else "-",
            r.error or "-",
        ])
    widths = [max(len(row[i]) for row in rows) for i in range(len(cols))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)) for row in rows]
    return "\n".join(lines)


def reports_to_json(reports: list[BenchReport]) -> str:
    return json.dumps([r.to_json_dict() for r in reports], indent=2)
