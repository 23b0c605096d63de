"""Per-object neighbor lists sorted by distance.

Construction costs O(n^2 log n) and the lists answer rho by binary search
and delta by a near-to-far scan that stops at the first outranking
neighbor.  Row-level helpers are exposed separately so large-n harnesses
can stream blocks of rows without materializing the full index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import NUMBA_ENABLED, njit
from .dataset import Dataset
from .errors import UsageError
from .geometry import pairwise_dists
from .profile import NO_MU, rank_positions

_BLOCK = 256


def neighbor_rows(points: np.ndarray, row_ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sorted (ids, dists) neighbor rows for the given objects.

    Each row covers all other objects in non-decreasing distance order;
    equal distances keep ascending id order (stable sort over id-ordered
    input).  The object itself is excluded.
    """
    points = np.asarray(points, dtype=np.float64)
    row_ids = np.asarray(row_ids, dtype=np.int64)
    d = pairwise_dists(points[row_ids], points)
    d[np.arange(row_ids.shape[0]), row_ids] = -np.inf  # self sorts first, then dropped
    order = np.argsort(d, axis=1, kind="stable")
    dists = np.take_along_axis(d, order, axis=1)[:, 1:]
    ids = order[:, 1:].astype(np.int32)
    return ids, dists


@dataclass
class NeighborList:
    """Distance-sorted neighbor table; row ``p`` lists all objects but ``p``."""

    ids: np.ndarray    # (n, n-1) int32
    dists: np.ndarray  # (n, n-1) float64

    @property
    def n(self) -> int:
        return self.ids.shape[0]

    def row(self, p: int) -> tuple[np.ndarray, np.ndarray]:
        return self.ids[p], self.dists[p]

    def estimated_bytes(self) -> int:
        return self.ids.nbytes + self.dists.nbytes


def build_list_index(ds: Dataset | np.ndarray) -> NeighborList:
    points = ds.points if isinstance(ds, Dataset) else np.asarray(ds, dtype=np.float64)
    n = points.shape[0]
    ids = np.empty((n, max(n - 1, 0)), dtype=np.int32)
    dists = np.empty((n, max(n - 1, 0)), dtype=np.float64)
    for s in range(0, n, _BLOCK):
        e = min(s + _BLOCK, n)
        bi, bd = neighbor_rows(points, np.arange(s, e))
        ids[s:e] = bi
        dists[s:e] = bd
    return NeighborList(ids=ids, dists=dists)


# --- rho ------------------------------------------------------------------


def list_rho(nl: NeighborList, p: int, dc: float) -> int:
    """Count of list entries strictly closer than dc (binary search)."""
    if dc <= 0:
        raise UsageError("dc must be positive")
    return int(np.searchsorted(nl.dists[p], dc, side="left"))


@njit(cache=True)
def _rho_rows_kernel(dists, dc):
    m = dists.shape[0]
    out = np.empty(m, dtype=np.int64)
    for i in range(m):
        out[i] = np.searchsorted(dists[i], dc)
    return out


def rho_rows(dists: np.ndarray, dc: float) -> np.ndarray:
    """Vector of strict-< counts for a block of sorted distance rows."""
    if dc <= 0:
        raise UsageError("dc must be positive")
    if NUMBA_ENABLED:
        return _rho_rows_kernel(dists, dc)
    return np.array(
        [np.searchsorted(row, dc, side="left") for row in dists], dtype=np.int64
    )


def list_rho_all(nl: NeighborList, dc: float) -> np.ndarray:
    return rho_rows(nl.dists, dc)


# --- delta ----------------------------------------------------------------


@njit(cache=True)
def _delta_scan_kernel(nbr_ids, nbr_dists, pids, rank):
    m = nbr_ids.shape[0]
    width = nbr_ids.shape[1]
    delta = np.zeros(m, dtype=np.float64)
    mu = np.full(m, -1, dtype=np.int64)
    scans = np.zeros(m, dtype=np.int64)
    for i in range(m):
        rp = rank[pids[i]]
        hit = False
        for j in range(width):
            q = nbr_ids[i, j]
            if rank[q] < rp:
                delta[i] = nbr_dists[i, j]
                mu[i] = q
                scans[i] = j + 1
                hit = True
                break
        if not hit:
            # exhausted: only the global peak does this on a full list
            scans[i] = width
            if width > 0:
                delta[i] = nbr_dists[i, width - 1]
    return delta, mu, scans


def _delta_scan_numpy(nbr_ids, nbr_dists, pids, rank):
    m, width = nbr_ids.shape
    delta = np.zeros(m, dtype=np.float64)
    mu = np.full(m, NO_MU, dtype=np.int64)
    scans = np.full(m, width, dtype=np.int64)
    if width == 0:
        return delta, mu, scans
    higher = rank[nbr_ids] < rank[pids][:, None]
    has = higher.any(axis=1)
    first = np.argmax(higher, axis=1)
    rows = np.nonzero(has)[0]
    delta[rows] = nbr_dists[rows, first[rows]]
    mu[rows] = nbr_ids[rows, first[rows]]
    scans[rows] = first[rows] + 1
    delta[~has] = nbr_dists[~has, width - 1]
    return delta, mu, scans


def delta_scan_rows(
    nbr_ids: np.ndarray, nbr_dists: np.ndarray, pids: np.ndarray, rank: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(delta, mu, scan lengths) for a block of rows under a global rank.

    mu is NO_MU when the scan exhausts the row; on full rows that is
    exactly the global peak, whose delta is then the last (farthest) entry.
    """
    pids = np.asarray(pids, dtype=np.int64)
    if NUMBA_ENABLED:
        return _delta_scan_kernel(nbr_ids, nbr_dists, pids, rank)
    return _delta_scan_numpy(nbr_ids, nbr_dists, pids, rank)


def list_delta(nl: NeighborList, p: int, rho: np.ndarray) -> tuple[float, int | None]:
    """Near-to-far scan for one object; None mu marks the global peak."""
    rank = rank_positions(np.asarray(rho))
    delta, mu, _ = delta_scan_rows(
        nl.ids[p : p + 1], nl.dists[p : p + 1], np.array([p]), rank
    )
    return float(delta[0]), (None if mu[0] == NO_MU else int(mu[0]))


def list_delta_all(
    nl: NeighborList, rho: np.ndarray, return_scans: bool = False
):
    rank = rank_positions(np.asarray(rho))
    pids = np.arange(nl.n, dtype=np.int64)
    delta, mu, scans = delta_scan_rows(nl.ids, nl.dists, pids, rank)
    if return_scans:
        return delta, mu, scans
    return delta, mu
