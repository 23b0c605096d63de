"""Truncated neighbor lists for the memory-bounded approximate mode.

Each object keeps only the prefix of its neighbor list with distance
strictly below the threshold tau.  For dc <= tau, rho is exact; delta/mu
found within the prefix are exact because the prefix is distance-sorted.
Objects whose scan exhausts the prefix (always including the global peak)
get a sentinel delta, no mu, and resolved=False, which keeps them at the
top of the decision graph's delta axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import NUMBA_ENABLED, njit
from .chindex import CumulativeHistogram, ch_rho_rows, ch_rows_from_dists
from .dataset import Dataset
from .errors import UsageError
from .listindex import neighbor_rows
from .profile import NO_MU, DensityProfile, rank_positions

_BLOCK = 256


@dataclass
class ReducedNeighborList:
    """Prefix-truncated neighbor lists (ragged rows)."""

    tau: float
    sentinel_delta: float  # upper bound on any true delta (bbox diagonal)
    ids: np.ndarray        # flattened int32 neighbor ids
    dists: np.ndarray      # flattened float64 distances
    offsets: np.ndarray    # (n+1,) row boundaries
    ch: CumulativeHistogram | None = None

    @property
    def n(self) -> int:
        return self.offsets.shape[0] - 1

    def row(self, p: int) -> tuple[np.ndarray, np.ndarray]:
        s, e = self.offsets[p], self.offsets[p + 1]
        return self.ids[s:e], self.dists[s:e]

    def estimated_bytes(self) -> int:
        total = self.ids.nbytes + self.dists.nbytes + self.offsets.nbytes
        if self.ch is not None:
            total += self.ch.estimated_bytes()
        return total


def build_rn_list(
    ds: Dataset, tau: float, w: float | None = None
) -> ReducedNeighborList:
    """Build truncated lists directly from the dataset, block by block,
    so peak memory tracks the retained entries rather than n^2."""
    if tau <= 0:
        raise UsageError("tau must be positive")
    points = ds.points
    n = points.shape[0]
    id_parts: list[np.ndarray] = []
    dist_parts: list[np.ndarray] = []
    offsets = np.zeros(n + 1, dtype=np.int64)
    for s in range(0, n, _BLOCK):
        e = min(s + _BLOCK, n)
        bi, bd = neighbor_rows(points, np.arange(s, e))
        for i in range(e - s):
            keep = int(np.searchsorted(bd[i], tau, side="left"))
            id_parts.append(bi[i, :keep].copy())
            dist_parts.append(bd[i, :keep].copy())
            offsets[s + i + 1] = offsets[s + i] + keep
    ids = np.concatenate(id_parts) if id_parts else np.zeros(0, dtype=np.int32)
    dists = np.concatenate(dist_parts) if dist_parts else np.zeros(0, dtype=np.float64)

    ch = None
    if w is not None:
        rows = [dists[offsets[p] : offsets[p + 1]] for p in range(n)]
        counts, ch_offsets = ch_rows_from_dists(rows, w)
        ch = CumulativeHistogram(w=float(w), counts=counts, offsets=ch_offsets)

    return ReducedNeighborList(
        tau=float(tau),
        sentinel_delta=ds.diameter_bound(),
        ids=ids,
        dists=dists,
        offsets=offsets,
        ch=ch,
    )


@njit(cache=True)
def _rho_ragged_kernel(dists, offsets, dc):
    n = offsets.shape[0] - 1
    out = np.empty(n, dtype=np.int64)
    for p in range(n):
        out[p] = np.searchsorted(dists[offsets[p] : offsets[p + 1]], dc)
    return out


def _rho_ragged(dists, offsets, dc):
    if NUMBA_ENABLED:
        return _rho_ragged_kernel(dists, offsets, dc)
    n = offsets.shape[0] - 1
    return np.array(
        [
            np.searchsorted(dists[offsets[p] : offsets[p + 1]], dc, side="left")
            for p in range(n)
        ],
        dtype=np.int64,
    )


@njit(cache=True)
def _delta_ragged_kernel(ids, dists, offsets, rank, sentinel):
    n = offsets.shape[0] - 1
    delta = np.full(n, sentinel, dtype=np.float64)
    mu = np.full(n, -1, dtype=np.int64)
    resolved = np.zeros(n, dtype=np.bool_)
    for p in range(n):
        rp = rank[p]
        for j in range(offsets[p], offsets[p + 1]):
            q = ids[j]
            if rank[q] < rp:
                delta[p] = dists[j]
                mu[p] = q
                resolved[p] = True
                break
    return delta, mu, resolved


def _delta_ragged_numpy(ids, dists, offsets, rank, sentinel):
    n = offsets.shape[0] - 1
    delta = np.full(n, sentinel, dtype=np.float64)
    mu = np.full(n, NO_MU, dtype=np.int64)
    resolved = np.zeros(n, dtype=bool)
    for p in range(n):
        s, e = offsets[p], offsets[p + 1]
        hit = np.nonzero(rank[ids[s:e]] < rank[p])[0]
        if hit.shape[0]:
            j = s + hit[0]
            delta[p] = dists[j]
            mu[p] = ids[j]
            resolved[p] = True
    return delta, mu, resolved


def rn_rho(rn: ReducedNeighborList, dc: float) -> np.ndarray:
    """Strict-< counts on the truncated lists; exact iff dc <= tau,
    otherwise a lower bound (the caller flags the profile degraded)."""
    if dc <= 0:
        raise UsageError("dc must be positive")
    if rn.ch is not None:
        rows = [rn.dists[rn.offsets[p] : rn.offsets[p + 1]] for p in range(rn.n)]
        rho, _ = ch_rho_rows(rn.ch.counts, rn.ch.offsets, rows, rn.ch.w, dc)
        return rho
    return _rho_ragged(rn.dists, rn.offsets, dc)


def rn_delta(
    rn: ReducedNeighborList, rank: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(delta, mu, resolved) from the truncated scans; unresolved objects
    carry the sentinel delta and no mu."""
    if NUMBA_ENABLED:
        delta, mu, resolved = _delta_ragged_kernel(
            rn.ids, rn.dists, rn.offsets, rank, rn.sentinel_delta
        )
    else:
        delta, mu, resolved = _delta_ragged_numpy(
            rn.ids, rn.dists, rn.offsets, rank, rn.sentinel_delta
        )
    return delta, mu, np.asarray(resolved, dtype=bool)


def approx_profile(rn: ReducedNeighborList, dc: float) -> DensityProfile:
    rho = rn_rho(rn, dc)
    delta, mu, resolved = rn_delta(rn, rank_positions(rho))
    return DensityProfile(
        dc=dc,
        rho=rho,
        delta=delta,
        mu=mu,
        resolved=resolved,
        degraded=dc > rn.tau,
    )
