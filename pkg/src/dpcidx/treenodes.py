"""Array-backed spatial tree shared by the quadtree and R-tree builders.

Nodes live in struct-of-arrays form so the query kernels run allocation
free.  Layout contract relied on throughout:

  * parents precede their children (node 0 is the root), so a reverse
    index sweep is a valid post-order traversal;
  * the children of a node occupy a contiguous index block;
  * leaf object ids sit in ``perm[leaf_start : leaf_start + leaf_count]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NO_CHILD = -1


@dataclass
class SpatialTree:
    kind: str               # "quadtree" | "rtree"
    points: np.ndarray      # (n, d) float64, shared with the dataset
    lo: np.ndarray          # (m, d) node bounds
    hi: np.ndarray          # (m, d)
    first_child: np.ndarray  # (m,) int64; NO_CHILD marks a leaf
    n_children: np.ndarray   # (m,) int64
    leaf_start: np.ndarray   # (m,) int64 into perm (leaves only)
    leaf_count: np.ndarray   # (m,) int64
    nc: np.ndarray           # (m,) subtree object counts
    perm: np.ndarray         # (n,) object ids grouped by leaf
    height: int
    params: dict = field(default_factory=dict)
    maxrho: np.ndarray | None = None  # filled by annotate_maxrho

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.lo.shape[0]

    def is_leaf(self, v: int) -> bool:
        return self.first_child[v] == NO_CHILD

    def leaf_ids(self, v: int) -> np.ndarray:
        s = self.leaf_start[v]
        return self.perm[s : s + self.leaf_count[v]]

    def estimated_bytes(self) -> int:
        total = self.perm.nbytes
        for a in (
            self.lo,
            self.hi,
            self.first_child,
            self.n_children,
            self.leaf_start,
            self.leaf_count,
            self.nc,
        ):
            total += a.nbytes
        if self.maxrho is not None:
            total += self.maxrho.nbytes
        return total


def annotate_maxrho(tree: SpatialTree, rho: np.ndarray) -> None:
    """Post-order pass storing the max rho of each subtree (-1 when empty)."""
    rho = np.asarray(rho, dtype=np.int64)
    m = tree.n_nodes
    maxrho = np.full(m, -1, dtype=np.int64)
    for v in range(m - 1, -1, -1):
        if tree.first_child[v] == NO_CHILD:
            ids = tree.leaf_ids(v)
            if ids.shape[0]:
                maxrho[v] = rho[ids].max()
        else:
            fc = tree.first_child[v]
            maxrho[v] = maxrho[fc : fc + tree.n_children[v]].max()
    tree.maxrho = maxrho
