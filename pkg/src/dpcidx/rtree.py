"""R-tree bulk-loaded with sort-tile-recursive packing.

Leaves come from slab partitioning: sort on x, cut ceil(sqrt(L)) slabs of
M*ceil(sqrt(L)) objects, sort each slab on y, cut runs of M (dimensions
cycle per level for d > 2; ties always break by id).  Internal levels
re-run the same partitioning on child mbr centers until a single root
remains, which keeps all leaves at equal depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import UsageError
from .treenodes import NO_CHILD, SpatialTree


@dataclass(frozen=True)
class RTreeConfig:
    fanout: int = 64  # max entries per node (M)

    def __post_init__(self):
        if self.fanout < 2:
            raise UsageError("fanout must be >= 2")


def str_groups(ids: np.ndarray, coords: np.ndarray, m: int, level: int = 0) -> list[np.ndarray]:
    """Partition ids into groups of at most m by recursive coordinate slabs."""
    s = ids.shape[0]
    if s <= m:
        return [ids]
    d = coords.shape[1]
    key = coords[ids, level % d]
    ids = ids[np.lexsort((ids, key))]
    leaves_needed = math.ceil(s / m)
    remaining_dims = max(d - level, 1)
    if remaining_dims == 1:
        chunk = m
    else:
        slabs = math.ceil(leaves_needed ** (1.0 / remaining_dims))
        chunk = m * slabs ** (remaining_dims - 1)
    groups: list[np.ndarray] = []
    for i in range(0, s, chunk):
        part = ids[i : i + chunk]
        if part.shape[0] <= m:
            groups.append(part)
        else:
            groups.extend(str_groups(part, coords, m, level + 1))
    return groups


class _Rec:
    __slots__ = ("lo", "hi", "nc", "first_local", "n_children", "leaf_start", "leaf_count")

    def __init__(self, lo, hi, nc, first_local=-1, n_children=0, leaf_start=0, leaf_count=0):
        self.lo = lo
        self.hi = hi
        self.nc = nc
        self.first_local = first_local
        self.n_children = n_children
        self.leaf_start = leaf_start
        self.leaf_count = leaf_count


def build_rtree(ds: Dataset | np.ndarray, cfg: RTreeConfig | None = None) -> SpatialTree:
    cfg = cfg or RTreeConfig()
    points = ds.points if isinstance(ds, Dataset) else np.asarray(ds, dtype=np.float64)
    n, d = points.shape
    m = cfg.fanout

    groups = str_groups(np.arange(n, dtype=np.int64), points, m)
    perm = np.empty(n, dtype=np.int64)
    leaves: list[_Rec] = []
    fill = 0
    for g in groups:
        g = np.sort(g)
        perm[fill : fill + g.shape[0]] = g
        pts = points[g]
        leaves.append(
            _Rec(
                lo=pts.min(axis=0),
                hi=pts.max(axis=0),
                nc=g.shape[0],
                leaf_start=fill,
                leaf_count=g.shape[0],
            )
        )
        fill += g.shape[0]

    # internal levels: repack child mbr centers with the same partitioning;
    # each level is permuted so every parent's children sit contiguously
    levels: list[list[_Rec]] = [leaves]
    while len(levels[-1]) > 1:
        cur = levels[-1]
        centers = np.array([(r.lo + r.hi) * 0.5 for r in cur])
        parent_groups = str_groups(np.arange(len(cur), dtype=np.int64), centers, m)
        new_cur: list[_Rec] = []
        parents: list[_Rec] = []
        for g in parent_groups:
            start = len(new_cur)
            members = [cur[i] for i in g]
            new_cur.extend(members)
            parents.append(
                _Rec(
                    lo=np.min([r.lo for r in members], axis=0),
                    hi=np.max([r.hi for r in members], axis=0),
                    nc=sum(r.nc for r in members),
                    first_local=start,
                    n_children=len(members),
                )
            )
        levels[-1] = new_cur
        levels.append(parents)

    # global layout: root level first, then each level below in order
    offsets = []
    total = 0
    for lvl in reversed(levels):
        offsets.append(total)
        total += len(lvl)
    offsets = offsets[::-1]  # offsets[j] = global start of levels[j]

    lo = np.empty((total, d), dtype=np.float64)
    hi = np.empty((total, d), dtype=np.float64)
    first_child = np.full(total, NO_CHILD, dtype=np.int64)
    n_children = np.zeros(total, dtype=np.int64)
    leaf_start = np.zeros(total, dtype=np.int64)
    leaf_count = np.zeros(total, dtype=np.int64)
    nc = np.zeros(total, dtype=np.int64)
    for j, lvl in enumerate(levels):
        base = offsets[j]
        for i, r in enumerate(lvl):
            g = base + i
            lo[g] = r.lo
            hi[g] = r.hi
            nc[g] = r.nc
            if r.first_local >= 0:
                first_child[g] = offsets[j - 1] + r.first_local
                n_children[g] = r.n_children
            else:
                leaf_start[g] = r.leaf_start
                leaf_count[g] = r.leaf_count

    return SpatialTree(
        kind="rtree",
        points=points,
        lo=lo,
        hi=hi,
        first_child=first_child,
        n_children=n_children,
        leaf_start=leaf_start,
        leaf_count=leaf_count,
        nc=nc,
        perm=perm,
        height=len(levels) - 1,
        params={"fanout": m},
    )
