"""Distance primitives and axis-aligned rectangles.

All coordinates are float64 and the metric is Euclidean.  Every routine
accumulates per-dimension terms in dimension order before the final sqrt,
so scalar, vectorized and jitted callers produce bit-identical distances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import njit
from .errors import UsageError


class DimensionMismatch(UsageError):
    """Operands live in spaces of different dimension."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned box; ``lo[i] <= hi[i]`` in every dimension."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=np.float64))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=np.float64))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise DimensionMismatch("rect bounds must be 1-d vectors of equal length")
        if np.any(lo > hi):
            raise ValueError("rect lower bound exceeds upper bound")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.shape[0]

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=np.float64)
        return bool(np.all(p >= self.lo) and np.all(p <= self.hi))

    def diagonal(self) -> float:
        d = 0.0
        for k in range(self.dim):
            e = self.hi[k] - self.lo[k]
            d += e * e
        return float(np.sqrt(d))


def _check_dims(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimension mismatch: {a.shape} vs {b.shape}")


def dist(p, q) -> float:
    """Euclidean distance between two coordinate vectors."""
    p = np.atleast_1d(np.asarray(p, dtype=np.float64))
    q = np.atleast_1d(np.asarray(q, dtype=np.float64))
    _check_dims(p, q)
    s = 0.0
    for k in range(p.shape[0]):
        e = p[k] - q[k]
        s += e * e
    return float(np.sqrt(s))


def min_dist_to_rect(p, r: Rect) -> float:
    """Distance from ``p`` to the nearest point of ``r`` (0 when inside)."""
    p = np.atleast_1d(np.asarray(p, dtype=np.float64))
    _check_dims(p, r.lo)
    s = 0.0
    for k in range(p.shape[0]):
        if p[k] < r.lo[k]:
            e = r.lo[k] - p[k]
        elif p[k] > r.hi[k]:
            e = p[k] - r.hi[k]
        else:
            continue
        s += e * e
    return float(np.sqrt(s))


def max_dist_to_rect(p, r: Rect) -> float:
    """Distance from ``p`` to the farthest corner of ``r``."""
    p = np.atleast_1d(np.asarray(p, dtype=np.float64))
    _check_dims(p, r.lo)
    s = 0.0
    for k in range(p.shape[0]):
        e = max(abs(p[k] - r.lo[k]), abs(r.hi[k] - p[k]))
        s += e * e
    return float(np.sqrt(s))


# --- jitted forms used by the tree query kernels -------------------------
#
# These operate on raw arrays (point row index + node row index) so that the
# tree traversals never allocate.  Term order matches the scalar functions.


@njit(cache=True)
def point_dist(points, i, j):
    s = 0.0
    for k in range(points.shape[1]):
        e = points[i, k] - points[j, k]
        s += e * e
    return np.sqrt(s)


@njit(cache=True)
def coords_dist(points, i, q):
    s = 0.0
    for k in range(points.shape[1]):
        e = points[i, k] - q[k]
        s += e * e
    return np.sqrt(s)


@njit(cache=True)
def node_min_dist(points, i, lo, hi, v):
    s = 0.0
    for k in range(points.shape[1]):
        c = points[i, k]
        if c < lo[v, k]:
            e = lo[v, k] - c
        elif c > hi[v, k]:
            e = c - hi[v, k]
        else:
            continue
        s += e * e
    return np.sqrt(s)


@njit(cache=True)
def node_max_dist(points, i, lo, hi, v):
    s = 0.0
    for k in range(points.shape[1]):
        c = points[i, k]
        a = abs(c - lo[v, k])
        b = abs(hi[v, k] - c)
        e = a if a > b else b
        s += e * e
    return np.sqrt(s)


def pairwise_dists(block: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Distances from each row of ``block`` to every row of ``points``.

    Accumulates squared differences one dimension at a time so the result is
    bit-identical to the scalar/jitted kernels.
    """
    block = np.asarray(block, dtype=np.float64)
    points = np.asarray(points, dtype=np.float64)
    acc = np.zeros((block.shape[0], points.shape[0]), dtype=np.float64)
    for k in range(points.shape[1]):
        diff = block[:, k, None] - points[None, :, k]
        np.multiply(diff, diff, out=diff)
        acc += diff
    return np.sqrt(acc, out=acc)
