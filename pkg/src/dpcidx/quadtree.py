"""Region quadtree (2^d-way midpoint splits) over the dataset extent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import UsageError
from .treenodes import NO_CHILD, SpatialTree

ROOT_MARGIN = 1e-9  # relative padding so boundary points are interior


@dataclass(frozen=True)
class QuadConfig:
    leaf_capacity: int = 64
    max_depth: int = 32

    def __post_init__(self):
        if self.leaf_capacity < 1 or self.max_depth < 1:
            raise UsageError("leaf_capacity and max_depth must be >= 1")


def _padded_extent(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    scale = np.maximum.reduce([hi - lo, np.abs(lo), np.abs(hi), np.ones_like(lo)])
    pad = ROOT_MARGIN * scale
    return lo - pad, hi + pad


def build_quadtree(ds: Dataset | np.ndarray, cfg: QuadConfig | None = None) -> SpatialTree:
    """Split nodes over capacity into 2^d equal children until capacity or
    max depth is reached; duplicates that cannot separate stop at max depth."""
    cfg = cfg or QuadConfig()
    points = ds.points if isinstance(ds, Dataset) else np.asarray(ds, dtype=np.float64)
    n, d = points.shape
    if d > 16:
        raise UsageError("quadtree splits 2^d ways; d > 16 is not supported")
    n_split = 1 << d

    root_lo, root_hi = _padded_extent(points)

    lo_l: list[np.ndarray] = [root_lo]
    hi_l: list[np.ndarray] = [root_hi]
    first_child = [NO_CHILD]
    n_children = [0]
    leaf_start = [0]
    leaf_count = [0]
    nc = [n]

    perm = np.empty(n, dtype=np.int64)
    perm_fill = 0
    height = 0

    # stack of (node index, member ids, depth); children allocated in one
    # contiguous block at split time, so parent index < child index
    stack: list[tuple[int, np.ndarray, int]] = [(0, np.arange(n, dtype=np.int64), 0)]
    while stack:
        v, ids, depth = stack.pop()
        height = max(height, depth)
        if ids.shape[0] <= cfg.leaf_capacity or depth >= cfg.max_depth:
            start = perm_fill
            perm[start : start + ids.shape[0]] = np.sort(ids)
            perm_fill += ids.shape[0]
            leaf_start[v] = start
            leaf_count[v] = ids.shape[0]
            continue

        mid = (lo_l[v] + hi_l[v]) * 0.5
        # child bitmask: bit k set means the upper half along dimension k
        codes = np.zeros(ids.shape[0], dtype=np.int64)
        for k in range(d):
            codes |= (points[ids, k] >= mid[k]).astype(np.int64) << k

        base = len(lo_l)
        first_child[v] = base
        n_children[v] = n_split
        order = np.argsort(codes, kind="stable")
        ids_sorted = ids[order]
        codes_sorted = codes[order]
        bounds = np.searchsorted(codes_sorted, np.arange(n_split + 1))
        for c in range(n_split):
            clo = lo_l[v].copy()
            chi = hi_l[v].copy()
            for k in range(d):
                if (c >> k) & 1:
                    clo[k] = mid[k]
                else:
                    chi[k] = mid[k]
            member = ids_sorted[bounds[c] : bounds[c + 1]]
            lo_l.append(clo)
            hi_l.append(chi)
            first_child.append(NO_CHILD)
            n_children.append(0)
            leaf_start.append(0)
            leaf_count.append(0)
            nc.append(member.shape[0])
            stack.append((base + c, member, depth + 1))

    return SpatialTree(
        kind="quadtree",
        points=points,
        lo=np.asarray(lo_l, dtype=np.float64),
        hi=np.asarray(hi_l, dtype=np.float64),
        first_child=np.asarray(first_child, dtype=np.int64),
        n_children=np.asarray(n_children, dtype=np.int64),
        leaf_start=np.asarray(leaf_start, dtype=np.int64),
        leaf_count=np.asarray(leaf_count, dtype=np.int64),
        nc=np.asarray(nc, dtype=np.int64),
        perm=perm,
        height=height,
        params={"leaf_capacity": cfg.leaf_capacity, "max_depth": cfg.max_depth},
    )
