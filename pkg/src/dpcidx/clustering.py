"""Center selection, mu-chain assignment, and outlier flagging.

Assignment walks objects in descending density order so every non-center
inherits the label of its dependent neighbor, which is already labeled.
Objects that cannot inherit (unresolved delta in approximate profiles, or
a global peak that was not chosen as a center) are labeled unassigned and
surfaced, never silently attached to a cluster.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .profile import NO_MU, DensityProfile, density_rank, rank_positions

UNASSIGNED = -1


@dataclass(frozen=True)
class CenterSelection:
    """One of: explicit ids, (rho_min, delta_min) thresholds, top-k by gamma."""

    mode: str  # "explicit" | "threshold" | "topk"
    ids: tuple = ()
    rho_min: float = 0.0
    delta_min: float = 0.0
    k: int = 1

    def __post_init__(self):
        if self.mode not in ("explicit", "threshold", "topk"):
            raise UsageError(f"unknown selection mode: {self.mode!r}")
        if self.mode == "topk" and self.k < 1:
            raise UsageError("k must be >= 1")
        if self.mode == "threshold" and (self.rho_min < 0 or self.delta_min < 0):
            raise UsageError("thresholds must be >= 0")


def select_centers(profile: DensityProfile, sel: CenterSelection) -> np.ndarray:
    """Chosen center ids, ascending.  Unresolved delta counts as infinite."""
    n = profile.n
    if sel.mode == "explicit":
        ids = np.unique(np.asarray(sel.ids, dtype=np.int64))
        if ids.size and (ids.min() < 0 or ids.max() >= n):
            raise UsageError("explicit center id out of range")
        centers = ids
    elif sel.mode == "threshold":
        eff_delta = np.where(profile.resolved, profile.delta, np.inf)
        mask = (profile.rho >= sel.rho_min) & (eff_delta >= sel.delta_min)
        centers = np.nonzero(mask)[0].astype(np.int64)
    else:
        if sel.k > n:
            raise UsageError(f"k={sel.k} exceeds dataset size {n}")
        gamma = profile.gamma()
        order = np.lexsort((rank_positions(profile.rho), -gamma))
        centers = np.sort(order[: sel.k].astype(np.int64))
    if centers.size == 0:
        raise UsageError("no centers selected")
    return centers


@dataclass
class Clustering:
    """Center set plus per-object labels; UNASSIGNED marks orphans."""

    dc: float
    centers: np.ndarray          # (c,) int64, ascending
    labels: np.ndarray           # (n,) int64 index into centers, or UNASSIGNED
    outliers: np.ndarray = field(default=None)  # (n,) bool, advisory

    def __post_init__(self):
        self.centers = np.asarray(self.centers, dtype=np.int64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.outliers is None:
            self.outliers = np.zeros(self.labels.shape[0], dtype=bool)
        self.outliers = np.asarray(self.outliers, dtype=bool)

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    def unassigned_ids(self) -> np.ndarray:
        return np.nonzero(self.labels == UNASSIGNED)[0]

    def cluster_sizes(self) -> np.ndarray:
        sizes = np.zeros(self.centers.shape[0], dtype=np.int64)
        assigned = self.labels[self.labels != UNASSIGNED]
        np.add.at(sizes, assigned, 1)
        return sizes

    def to_json_dict(self) -> dict:
        return {
            "dc": float(self.dc),
            "centers": self.centers.tolist(),
            "labels": self.labels.tolist(),
            "outliers": np.nonzero(self.outliers)[0].tolist(),
            "unassigned": self.unassigned_ids().tolist(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Clustering":
        labels = np.asarray(d["labels"], dtype=np.int64)
        outliers = np.zeros(labels.shape[0], dtype=bool)
        outliers[np.asarray(d.get("outliers", []), dtype=np.int64)] = True
        return cls(
            dc=float(d.get("dc", 0.0)),
            centers=np.asarray(d.get("centers", []), dtype=np.int64),
            labels=labels,
            outliers=outliers,
        )


def assign(profile: DensityProfile, centers) -> Clustering:
    """Label every object by following mu chains from the centers down."""
    centers = np.unique(np.asarray(centers, dtype=np.int64))
    if centers.size == 0:
        raise UsageError("centers must be non-empty")
    n = profile.n
    if centers.min() < 0 or centers.max() >= n:
        raise UsageError("center id out of range")

    center_label = {int(c): i for i, c in enumerate(centers)}
    labels = np.full(n, UNASSIGNED, dtype=np.int64)
    order = density_rank(profile.rho)
    for p in order:
        ci = center_label.get(int(p))
        if ci is not None:
            labels[p] = ci
            continue
        m = profile.mu[p]
        if m == NO_MU or not profile.resolved[p]:
            continue  # stays unassigned; descendants inherit that
        labels[p] = labels[m]
    return Clustering(dc=profile.dc, centers=centers, labels=labels)


def flag_outliers(
    profile: DensityProfile, rho_max: int, delta_min: float
) -> np.ndarray:
    """Advisory flags: low density and large (or unresolved) delta."""
    return (profile.rho <= rho_max) & (profile.delta >= delta_min)
