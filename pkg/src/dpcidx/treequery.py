"""Rho and delta queries over array-backed spatial trees.

rho classifies nodes against the query circle: discarded when the minimum
distance reaches dc, counted wholesale when the maximum distance stays
under dc, recursed otherwise; the object itself is removed from the final
count once.

delta explores nodes best-first by minimum distance, skipping subtrees
whose maxrho falls below the query's rho (density pruning) and nodes
strictly farther than the current candidate (distance pruning).  Nodes at
exactly the candidate distance are still explored so that equal-distance
candidates resolve to the smallest id, matching the reference tie rule.
Both prunings can be disabled and a stack discipline with local best-child
reorder is available besides the default priority queue; all variants
return identical delta/mu.  When no outranking object exists (the global
peak) a farthest-point traversal with max-distance pruning supplies delta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import njit
from .errors import UsageError
from .geometry import node_max_dist, node_min_dist, point_dist
from .profile import DensityProfile, rank_positions
from .treenodes import NO_CHILD, SpatialTree, annotate_maxrho


@njit(cache=True)
def _heap_push(keys, vals, size, key, val):
    i = size
    keys[i] = key
    vals[i] = val
    while i > 0:
        parent = (i - 1) >> 1
        if keys[parent] <= keys[i]:
            break
        keys[parent], keys[i] = keys[i], keys[parent]
        vals[parent], vals[i] = vals[i], vals[parent]
        i = parent
    return size + 1


@njit(cache=True)
def _heap_pop(keys, vals, size):
    top_key = keys[0]
    top_val = vals[0]
    size -= 1
    keys[0] = keys[size]
    vals[0] = vals[size]
    i = 0
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        small = left
        right = left + 1
        if right < size and keys[right] < keys[left]:
            small = right
        if keys[i] <= keys[small]:
            break
        keys[i], keys[small] = keys[small], keys[i]
        vals[i], vals[small] = vals[small], vals[i]
        i = small
    return top_key, top_val, size


@njit(cache=True)
def _rho_one(points, p, dc, lo, hi, first_child, n_children,
             leaf_start, leaf_count, nc, perm, stack):
    count = 0
    top = 0
    stack[top] = 0
    top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        if nc[v] == 0:
            continue
        if node_min_dist(points, p, lo, hi, v) >= dc:
            continue  # discarded
        if node_max_dist(points, p, lo, hi, v) < dc:
            count += nc[v]  # fully contained
            continue
        fc = first_child[v]
        if fc == NO_CHILD:
            s = leaf_start[v]
            for j in range(s, s + leaf_count[v]):
                if point_dist(points, p, perm[j]) < dc:
                    count += 1
        else:
            for c in range(fc, fc + n_children[v]):
                stack[top] = c
                top += 1
    return count - 1  # p is always inside the root


@njit(cache=True)
def _rho_all_kernel(points, dc, lo, hi, first_child, n_children,
                    leaf_start, leaf_count, nc, perm):
    n = points.shape[0]
    out = np.empty(n, dtype=np.int64)
    stack = np.empty(lo.shape[0] + 1, dtype=np.int64)
    for p in range(n):
        out[p] = _rho_one(points, p, dc, lo, hi, first_child, n_children,
                          leaf_start, leaf_count, nc, perm, stack)
    return out


@njit(cache=True)
def _delta_one(points, p, rho_p, rank, lo, hi, first_child, n_children,
               leaf_start, leaf_count, nc, maxrho, perm,
               use_density, use_distance, use_queue, keys, vals):
    best_d = np.inf
    best_mu = np.int64(-1)
    nodes_visited = 0
    leaves_visited = 0
    rank_p = rank[p]
    size = 0
    if use_queue:
        size = _heap_push(keys, vals, size, 0.0, 0)
    else:
        keys[0] = 0.0
        vals[0] = 0
        size = 1
    while size > 0:
        if use_queue:
            k, v, size = _heap_pop(keys, vals, size)
        else:
            size -= 1
            k = keys[size]
            v = vals[size]
        if use_distance and k > best_d:
            continue  # distance pruned at pop time
        nodes_visited += 1
        fc = first_child[v]
        if fc == NO_CHILD:
            leaves_visited += 1
            s = leaf_start[v]
            for j in range(s, s + leaf_count[v]):
                q = perm[j]
                if rank[q] < rank_p:
                    dq = point_dist(points, p, q)
                    if dq < best_d or (dq == best_d and q < best_mu):
                        best_d = dq
                        best_mu = q
        else:
            if use_queue:
                for c in range(fc, fc + n_children[v]):
                    if nc[c] == 0:
                        continue
                    if use_density and maxrho[c] < rho_p:
                        continue  # density pruned
                    dmin = node_min_dist(points, p, lo, hi, c)
                    if use_distance and dmin > best_d:
                        continue
                    size = _heap_push(keys, vals, size, dmin, c)
            else:
                # local reorder: keep the first minimum child on top of the stack
                best_key = np.inf
                best_c = np.int64(-1)
                for c in range(fc, fc + n_children[v]):
                    if nc[c] == 0:
                        continue
                    if use_density and maxrho[c] < rho_p:
                        continue
                    dmin = node_min_dist(points, p, lo, hi, c)
                    if use_distance and dmin > best_d:
                        continue
                    if dmin < best_key:
                        if best_c != -1:
                            keys[size] = best_key
                            vals[size] = best_c
                            size += 1
                        best_key = dmin
                        best_c = c
                    else:
                        keys[size] = dmin
                        vals[size] = c
                        size += 1
                if best_c != -1:
                    keys[size] = best_key
                    vals[size] = best_c
                    size += 1
    return best_d, best_mu, nodes_visited, leaves_visited


@njit(cache=True)
def _delta_all_instrumented_kernel(points, rho, rank, lo, hi, first_child,
                                   n_children, leaf_start, leaf_count, nc,
                                   maxrho, perm, use_density, use_distance,
                                   use_queue):
    n = points.shape[0]
    delta = np.empty(n, dtype=np.float64)
    mu = np.empty(n, dtype=np.int64)
    nodes = np.empty(n, dtype=np.int64)
    leaves = np.empty(n, dtype=np.int64)
    m = lo.shape[0]
    keys = np.empty(m + 1, dtype=np.float64)
    vals = np.empty(m + 1, dtype=np.int64)
    stack = np.empty(m + 1, dtype=np.int64)
    for p in range(n):
        d, mu_p, nv, lv = _delta_one(points, p, rho[p], rank, lo, hi,
                                     first_child, n_children, leaf_start,
                                     leaf_count, nc, maxrho, perm,
                                     use_density, use_distance, use_queue,
                                     keys, vals)
        if mu_p == -1:
            d = _farthest_one(points, p, lo, hi, first_child, n_children,
                              leaf_start, leaf_count, nc, perm, stack)
        delta[p] = d
        mu[p] = mu_p
        nodes[p] = nv
        leaves[p] = lv
    return delta, mu, nodes, leaves


@njit(cache=True)
def _farthest_one(points, p, lo, hi, first_child, n_children,
                  leaf_start, leaf_count, nc, perm, stack):
    best = 0.0
    top = 0
    stack[top] = 0
    top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        if nc[v] == 0:
            continue
        if node_max_dist(points, p, lo, hi, v) <= best:
            continue  # cannot strictly improve the max
        fc = first_child[v]
        if fc == NO_CHILD:
            s = leaf_start[v]
            for j in range(s, s + leaf_count[v]):
                d = point_dist(points, p, perm[j])
                if d > best:
                    best = d
        else:
            for c in range(fc, fc + n_children[v]):
                stack[top] = c
                top += 1
    return best


@njit(cache=True)
def _delta_all_kernel(points, rho, rank, lo, hi, first_child, n_children,
                      leaf_start, leaf_count, nc, maxrho, perm):
    n = points.shape[0]
    delta = np.empty(n, dtype=np.float64)
    mu = np.empty(n, dtype=np.int64)
    m = lo.shape[0]
    keys = np.empty(m + 1, dtype=np.float64)
    vals = np.empty(m + 1, dtype=np.int64)
    stack = np.empty(m + 1, dtype=np.int64)
    for p in range(n):
        d, mu_p, _, _ = _delta_one(points, p, rho[p], rank, lo, hi,
                                   first_child, n_children, leaf_start,
                                   leaf_count, nc, maxrho, perm,
                                   True, True, True, keys, vals)
        if mu_p == -1:
            d = _farthest_one(points, p, lo, hi, first_child, n_children,
                              leaf_start, leaf_count, nc, perm, stack)
        delta[p] = d
        mu[p] = mu_p
    return delta, mu


# --- python-facing wrappers -------------------------------------------------


def _arrays(tree: SpatialTree):
    return (tree.lo, tree.hi, tree.first_child, tree.n_children,
            tree.leaf_start, tree.leaf_count, tree.nc, tree.perm)


def tree_rho(tree: SpatialTree, p: int, dc: float) -> int:
    if dc <= 0:
        raise UsageError("dc must be positive")
    lo, hi, fc, nch, ls, lc, nc, perm = _arrays(tree)
    stack = np.empty(tree.n_nodes + 1, dtype=np.int64)
    return int(_rho_one(tree.points, p, dc, lo, hi, fc, nch, ls, lc, nc, perm, stack))


def tree_rho_all(tree: SpatialTree, dc: float) -> np.ndarray:
    if dc <= 0:
        raise UsageError("dc must be positive")
    lo, hi, fc, nch, ls, lc, nc, perm = _arrays(tree)
    return _rho_all_kernel(tree.points, dc, lo, hi, fc, nch, ls, lc, nc, perm)


@dataclass(frozen=True)
class TreeDeltaResult:
    delta: float
    mu: int | None
    nodes_visited: int
    leaves_visited: int


def _require_maxrho(tree: SpatialTree) -> np.ndarray:
    if tree.maxrho is None:
        raise UsageError("annotate_maxrho must run before delta queries")
    return tree.maxrho


def tree_delta(
    tree: SpatialTree,
    p: int,
    rho: np.ndarray,
    rank: np.ndarray | None = None,
    use_density: bool = True,
    use_distance: bool = True,
    traversal: str = "queue",
) -> TreeDeltaResult:
    """Single-object delta query with visit counters (for pruning tests)."""
    maxrho = _require_maxrho(tree)
    if traversal not in ("queue", "stack"):
        raise UsageError("traversal must be 'queue' or 'stack'")
    rho = np.asarray(rho, dtype=np.int64)
    if rank is None:
        rank = rank_positions(rho)
    lo, hi, fc, nch, ls, lc, nc, perm = _arrays(tree)
    m = tree.n_nodes
    keys = np.empty(m + 1, dtype=np.float64)
    vals = np.empty(m + 1, dtype=np.int64)
    d, mu, nodes, leaves = _delta_one(
        tree.points, p, rho[p], rank, lo, hi, fc, nch, ls, lc, nc, maxrho,
        perm, use_density, use_distance, traversal == "queue", keys, vals,
    )
    if mu == -1:
        stack = np.empty(m + 1, dtype=np.int64)
        d = _farthest_one(tree.points, p, lo, hi, fc, nch, ls, lc, nc, perm, stack)
        return TreeDeltaResult(float(d), None, int(nodes), int(leaves))
    return TreeDeltaResult(float(d), int(mu), int(nodes), int(leaves))


def tree_delta_all(
    tree: SpatialTree, rho: np.ndarray, rank: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray]:
    maxrho = _require_maxrho(tree)
    rho = np.asarray(rho, dtype=np.int64)
    if rank is None:
        rank = rank_positions(rho)
    lo, hi, fc, nch, ls, lc, nc, perm = _arrays(tree)
    return _delta_all_kernel(tree.points, rho, rank, lo, hi, fc, nch, ls, lc,
                             nc, maxrho, perm)


def tree_delta_all_instrumented(
    tree: SpatialTree,
    rho: np.ndarray,
    rank: np.ndarray | None = None,
    use_density: bool = True,
    use_distance: bool = True,
    traversal: str = "queue",
):
    """Batch delta with per-object node/leaf visit counters."""
    maxrho = _require_maxrho(tree)
    rho = np.asarray(rho, dtype=np.int64)
    if rank is None:
        rank = rank_positions(rho)
    lo, hi, fc, nch, ls, lc, nc, perm = _arrays(tree)
    return _delta_all_instrumented_kernel(
        tree.points, rho, rank, lo, hi, fc, nch, ls, lc, nc, maxrho, perm,
        use_density, use_distance, traversal == "queue",
    )


def tree_profile(tree: SpatialTree, dc: float) -> DensityProfile:
    """rho pass, maxrho annotation for that rho, then the delta pass."""
    rho = tree_rho_all(tree, dc)
    annotate_maxrho(tree, rho)
    delta, mu = tree_delta_all(tree, rho)
    return DensityProfile(
        dc=dc,
        rho=rho,
        delta=delta,
        mu=mu,
        resolved=np.ones(rho.shape[0], dtype=bool),
    )


def count_leaves(tree: SpatialTree) -> int:
    """Non-empty leaves; the denominator for pruning-effectiveness checks."""
    leaf = tree.first_child == NO_CHILD
    return int(np.count_nonzero(leaf & (tree.nc > 0)))
