"""Exhaustive pairwise reference for rho and delta.

This is the ground truth every index backend is tested against.  It is
deliberately plain: blocked numpy scans, no index structures, no shortcuts
shared with the code under test.

Conventions (all backends follow the same ones):
  * rho counts strictly-closer *other* objects: ``|{q != p : dist(p,q) < dc}|``.
  * delta of a non-peak is the distance to the nearest object that outranks
    it in the density order; distance ties pick the smallest id.
  * delta of the global peak is its distance to the farthest object, mu
    absent.  A singleton dataset has delta 0.
"""

from __future__ import annotations

import numpy as np

from .dataset import Dataset
from .errors import UsageError
from .geometry import pairwise_dists
from .profile import NO_MU, DensityProfile, density_rank

_BLOCK = 512


def _points_of(ds) -> np.ndarray:
    return ds.points if isinstance(ds, Dataset) else np.asarray(ds, dtype=np.float64)


def oracle_rho(ds, dc: float) -> np.ndarray:
    """Brute-force local density for every object."""
    if dc <= 0:
        raise UsageError("dc must be positive")
    pts = _points_of(ds)
    n = pts.shape[0]
    rho = np.empty(n, dtype=np.int64)
    for s in range(0, n, _BLOCK):
        e = min(s + _BLOCK, n)
        d = pairwise_dists(pts[s:e], pts)
        # the diagonal entry (self, distance 0) is always < dc; drop it
        rho[s:e] = (d < dc).sum(axis=1) - 1
    return rho


def oracle_delta(ds, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Brute-force dependent distance and neighbor for a computed rho."""
    pts = _points_of(ds)
    n = pts.shape[0]
    if rho.shape[0] != n:
        raise UsageError("rho length does not match dataset")
    order = density_rank(rho)
    delta = np.zeros(n, dtype=np.float64)
    mu = np.full(n, NO_MU, dtype=np.int64)

    g = order[0]
    delta[g] = pairwise_dists(pts[g : g + 1], pts)[0].max() if n > 1 else 0.0

    for i in range(1, n):
        p = order[i]
        cand = order[:i]
        d = pairwise_dists(pts[p : p + 1], pts[cand])[0]
        best = d.min()
        delta[p] = best
        mu[p] = cand[d == best].min()
    return delta, mu


def oracle_profile(ds, dc: float) -> DensityProfile:
    rho = oracle_rho(ds, dc)
    delta, mu = oracle_delta(ds, rho)
    return DensityProfile(
        dc=dc,
        rho=rho,
        delta=delta,
        mu=mu,
        resolved=np.ones(rho.shape[0], dtype=bool),
    )
