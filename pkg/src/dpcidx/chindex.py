"""Cumulative histogram layered on the neighbor lists.

For each object the histogram stores, per bin k, the number of list
entries with distance strictly below the bin's upper limit (k+1)*w; the
final entry equals the list length.  A rho query locates the target bin
from floor(dc/w) and searches only that bin's slice of the list, so the
work per object is the bin occupancy instead of log of the list length.

Bin upper limits are computed as (k+1)*w (one rounding per limit) rather
than by repeated accumulation, and the query re-brackets the floored bin
against those exact limits, so results match the strict-< semantics
bit-for-bit even when dc sits within one ulp of a bin edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import NUMBA_ENABLED, njit
from .errors import UsageError
from .listindex import NeighborList

_COUNT_DTYPE = np.int64


def _num_loop_bins(maxd: float, w: float) -> int:
    """Number of bins whose upper limit gets generated before the list is
    exhausted, i.e. count of k >= 1 with k*w <= maxd (float-exact)."""
    if maxd // w > 1e8:
        raise UsageError("bin width w is too small for the data scale")
    m = int(maxd // w)
    while (m + 1) * w <= maxd:
        m += 1
    while m >= 1 and m * w > maxd:
        m -= 1
    return m


def ch_rows_from_dists(dists_rows, w: float) -> tuple[np.ndarray, np.ndarray]:
    """Build ragged histograms (counts, offsets) for sorted distance rows."""
    if w <= 0:
        raise UsageError("bin width w must be positive")
    counts_parts = []
    offsets = np.zeros(len(dists_rows) + 1, dtype=np.int64)
    for i, row in enumerate(dists_rows):
        if row.shape[0] == 0:
            c = np.zeros(1, dtype=_COUNT_DTYPE)
        else:
            m = _num_loop_bins(float(row[-1]), w)
            uls = w * np.arange(1, m + 2, dtype=np.float64)
            c = np.searchsorted(row, uls, side="left").astype(_COUNT_DTYPE)
        counts_parts.append(c)
        offsets[i + 1] = offsets[i] + c.shape[0]
    counts = (
        np.concatenate(counts_parts)
        if counts_parts
        else np.zeros(0, dtype=_COUNT_DTYPE)
    )
    return counts, offsets


@dataclass
class CumulativeHistogram:
    """Ragged per-object prefix-count bins over a NeighborList."""

    w: float
    counts: np.ndarray   # flattened bin contents
    offsets: np.ndarray  # (n+1,) row boundaries into counts

    @property
    def n(self) -> int:
        return self.offsets.shape[0] - 1

    def row(self, p: int) -> np.ndarray:
        return self.counts[self.offsets[p] : self.offsets[p + 1]]

    def estimated_bytes(self) -> int:
        return self.counts.nbytes + self.offsets.nbytes


def build_ch_index(nl: NeighborList, w: float) -> CumulativeHistogram:
    counts, offsets = ch_rows_from_dists(nl.dists, w)
    return CumulativeHistogram(w=float(w), counts=counts, offsets=offsets)


@njit(cache=True)
def _ch_rho_rows_kernel(counts, offsets, dists, w, dc):
    m = offsets.shape[0] - 1
    rho = np.empty(m, dtype=np.int64)
    comparisons = np.zeros(m, dtype=np.int64)
    for i in range(m):
        lo = offsets[i]
        nb = offsets[i + 1] - lo
        q = dc // w
        t = nb if q > nb else int(q)
        while t > 0 and dc < t * w:
            t -= 1
        while t < nb and dc >= (t + 1) * w:
            t += 1
        if t >= nb:
            rho[i] = counts[lo + nb - 1]
            continue
        if t >= 1 and dc == t * w:
            # dc sits exactly on the previous bin's upper limit
            rho[i] = counts[lo + t - 1]
            continue
        first = counts[lo + t - 1] if t >= 1 else 0
        last = counts[lo + t]
        comparisons[i] = last - first
        rho[i] = first + np.searchsorted(dists[i, first:last], dc)
    return rho, comparisons


def _ch_rho_rows_numpy(counts, offsets, dists, w, dc):
    m = offsets.shape[0] - 1
    rho = np.empty(m, dtype=np.int64)
    comparisons = np.zeros(m, dtype=np.int64)
    for i in range(m):
        c = counts[offsets[i] : offsets[i + 1]]
        nb = c.shape[0]
        q = dc // w
        t = nb if q > nb else int(q)
        while t > 0 and dc < t * w:
            t -= 1
        while t < nb and dc >= (t + 1) * w:
            t += 1
        if t >= nb:
            rho[i] = c[nb - 1]
            continue
        if t >= 1 and dc == t * w:
            rho[i] = c[t - 1]
            continue
        first = int(c[t - 1]) if t >= 1 else 0
        last = int(c[t])
        comparisons[i] = last - first
        rho[i] = first + np.searchsorted(dists[i][first:last], dc, side="left")
    return rho, comparisons


def ch_rho_rows(
    counts: np.ndarray,
    offsets: np.ndarray,
    dists_rows: np.ndarray,
    w: float,
    dc: float,
) -> tuple[np.ndarray, np.ndarray]:
    """(rho, in-bin comparison counts) for a block of rows.

    The comparison count is the searched slice length; the exact-multiple
    shortcut and the beyond-last-bin path count zero.
    """
    if dc <= 0:
        raise UsageError("dc must be positive")
    if NUMBA_ENABLED and isinstance(dists_rows, np.ndarray) and dists_rows.ndim == 2:
        return _ch_rho_rows_kernel(counts, offsets, dists_rows, w, dc)
    return _ch_rho_rows_numpy(counts, offsets, dists_rows, w, dc)


def ch_rho(ch: CumulativeHistogram, nl: NeighborList, p: int, dc: float) -> int:
    rho, _ = ch_rho_rows(
        ch.counts[ch.offsets[p] : ch.offsets[p + 1]],
        np.array([0, ch.offsets[p + 1] - ch.offsets[p]], dtype=np.int64),
        nl.dists[p : p + 1],
        ch.w,
        dc,
    )
    return int(rho[0])


def ch_rho_all(
    ch: CumulativeHistogram, nl: NeighborList, dc: float, return_comparisons: bool = False
):
    rho, comparisons = ch_rho_rows(ch.counts, ch.offsets, nl.dists, ch.w, dc)
    if return_comparisons:
        return rho, comparisons
    return rho
