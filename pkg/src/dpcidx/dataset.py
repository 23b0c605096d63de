"""Dataset container, CSV ingestion, and seeded synthetic generators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CsvParseError, UsageError
from .geometry import Rect


@dataclass(frozen=True)
class Dataset:
    """Immutable set of d-dimensional points; object ids are row indices."""

    points: np.ndarray  # (n, d) float64
    source: str = "memory"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise UsageError("dataset must be a non-empty (n, d) array with d >= 1")
        if not np.all(np.isfinite(pts)):
            raise UsageError("dataset coordinates must be finite")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def bbox(self) -> Rect:
        return Rect(self.points.min(axis=0), self.points.max(axis=0))

    def diameter_bound(self) -> float:
        """Bounding-box diagonal; an upper bound on any pairwise distance."""
        return self.bbox.diagonal()


def _parse_cells(line: str) -> list[str]:
    if "," in line:
        return [c.strip() for c in line.split(",")]
    return line.split()


def load_csv(path) -> Dataset:
    """Load comma- or whitespace-separated numeric rows.

    Row order defines object ids.  A non-numeric first row is treated as a
    header.  Errors carry the 0-based data line number.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw = [ln.strip() for ln in fh]
    lines = [ln for ln in raw if ln]
    if not lines:
        raise CsvParseError(f"empty input file: {path}")

    start = 0
    try:
        [float(c) for c in _parse_cells(lines[0])]
    except ValueError:
        start = 1  # header row
    if start >= len(lines):
        raise CsvParseError(f"no data rows in {path}")

    rows: list[list[float]] = []
    width = None
    for i, ln in enumerate(lines[start:]):
        cells = _parse_cells(ln)
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise CsvParseError(
                f"ragged row: expected {width} columns, got {len(cells)}", line=i
            )
        try:
            rows.append([float(c) for c in cells])
        except ValueError:
            raise CsvParseError(f"non-numeric cell in row {ln!r}", line=i) from None
    return Dataset(np.asarray(rows, dtype=np.float64), source=str(path))


def save_csv(ds: Dataset, path) -> None:
    np.savetxt(path, ds.points, delimiter=",", fmt="%.17g")


@dataclass(frozen=True)
class GeneratorSpec:
    """Reproducible synthetic data: gaussian blobs or a uniform box."""

    kind: str = "blobs"  # "blobs" | "uniform"
    n: int = 1000
    d: int = 2
    k: int = 3
    spread: float = 1.0
    seed: int = 0
    field_scale: float = field(default=10.0)  # box side per sqrt(k), in spreads

    def __post_init__(self):
        if self.kind not in ("blobs", "uniform"):
            raise UsageError(f"unknown generator kind: {self.kind!r}")
        if self.n < 1 or self.d < 1 or self.k < 1 or self.spread <= 0:
            raise UsageError("generator requires n >= 1, d >= 1, k >= 1, spread > 0")


def generate(spec: GeneratorSpec) -> tuple[Dataset, np.ndarray]:
    """Build a dataset plus its ground-truth labels (all zero for uniform)."""
    rng = np.random.default_rng(spec.seed)
    if spec.kind == "uniform":
        side = spec.field_scale * spec.spread
        pts = rng.uniform(0.0, side, size=(spec.n, spec.d))
        labels = np.zeros(spec.n, dtype=np.int64)
    else:
        side = spec.field_scale * spec.spread * np.sqrt(spec.k)
        centers = rng.uniform(0.0, side, size=(spec.k, spec.d))
        labels = rng.integers(0, spec.k, size=spec.n)
        pts = centers[labels] + rng.normal(0.0, spec.spread, size=(spec.n, spec.d))
    src = f"gen:{spec.kind}(n={spec.n},d={spec.d},k={spec.k},seed={spec.seed})"
    return Dataset(pts, source=src), labels.astype(np.int64)
