"""Density profile (rho, delta, mu) and the total density order.

The density order breaks rho ties by id: ``p`` outranks ``q`` iff
``rho[p] > rho[q]`` or (``rho[p] == rho[q]`` and ``p < q``).  Every backend
resolves "higher density" through this order so duplicate-rho datasets have
a unique global peak.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

NO_MU = -1  # mu encoding for "absent" (the global peak, or unresolved)


def density_rank(rho: np.ndarray) -> np.ndarray:
    """Object ids sorted by descending density order (rho desc, id asc)."""
    rho = np.asarray(rho)
    n = rho.shape[0]
    return np.lexsort((np.arange(n), -rho)).astype(np.int64)


def rank_positions(rho: np.ndarray) -> np.ndarray:
    """Position of each object in the density order; 0 is the global peak."""
    order = density_rank(rho)
    pos = np.empty(order.shape[0], dtype=np.int64)
    pos[order] = np.arange(order.shape[0])
    return pos


def outranks(rank: np.ndarray, q: int, p: int) -> bool:
    return rank[q] < rank[p]


@dataclass
class DensityProfile:
    """Per-object rho, delta and dependent neighbor under one cutoff dc."""

    dc: float
    rho: np.ndarray       # (n,) int64
    delta: np.ndarray     # (n,) float64
    mu: np.ndarray        # (n,) int64, NO_MU where absent
    resolved: np.ndarray  # (n,) bool; False when delta is a sentinel
    degraded: bool = False  # approximate profile computed with dc > tau

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=np.int64)
        self.delta = np.asarray(self.delta, dtype=np.float64)
        self.mu = np.asarray(self.mu, dtype=np.int64)
        self.resolved = np.asarray(self.resolved, dtype=bool)

    @property
    def n(self) -> int:
        return self.rho.shape[0]

    def gamma(self) -> np.ndarray:
        """Center-selection score rho * delta."""
        return self.rho.astype(np.float64) * self.delta

    def rank(self) -> np.ndarray:
        return rank_positions(self.rho)

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(np.float64(self.dc).tobytes())
        h.update(self.rho.tobytes())
        h.update(self.delta.tobytes())
        h.update(self.mu.tobytes())
        h.update(self.resolved.astype(np.uint8).tobytes())
        h.update(b"degraded" if self.degraded else b"exact")
        return h.hexdigest()

    def to_json_dict(self) -> dict:
        return {
            "dc": float(self.dc),
            "n": int(self.n),
            "rho": self.rho.tolist(),
            "delta": self.delta.tolist(),
            "mu": self.mu.tolist(),
            "resolved": self.resolved.tolist(),
            "degraded": bool(self.degraded),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "DensityProfile":
        return cls(
            dc=float(d["dc"]),
            rho=np.asarray(d["rho"], dtype=np.int64),
            delta=np.asarray(d["delta"], dtype=np.float64),
            mu=np.asarray(d["mu"], dtype=np.int64),
            resolved=np.asarray(d["resolved"], dtype=bool),
            degraded=bool(d.get("degraded", False)),
        )

    def equals_exactly(self, other: "DensityProfile") -> bool:
        return (
            self.n == other.n
            and np.array_equal(self.rho, other.rho)
            and np.array_equal(self.delta, other.delta)
            and np.array_equal(self.mu, other.mu)
            and np.array_equal(self.resolved, other.resolved)
        )
