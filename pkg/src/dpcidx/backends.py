"""Uniform two-phase interface over every index backend.

Each backend is built once per dataset and then answers any number of
cutoffs: ``compute_rho(dc)`` is the density phase, ``compute_delta`` the
dependent-distance phase (for trees this includes the maxrho annotation
for that rho), and ``profile`` composes both into a DensityProfile.
Passing ``tau`` to the list-based backends switches them to the truncated
approximate mode.
"""

from __future__ import annotations

import numpy as np

from .chindex import build_ch_index, ch_rho_all
from .dataset import Dataset
from .errors import UsageError
from .listindex import build_list_index, delta_scan_rows, rho_rows
from .oracle import oracle_delta, oracle_rho
from .profile import DensityProfile, rank_positions
from .quadtree import QuadConfig, build_quadtree
from .rnlist import build_rn_list, rn_delta, rn_rho
from .rtree import RTreeConfig, build_rtree
from .treenodes import annotate_maxrho
from .treequery import tree_delta_all, tree_rho_all

BACKEND_NAMES = ("oracle", "list", "ch", "quadtree", "rtree")


class _ExactBackendBase:
    name = "?"

    def compute_rho(self, dc: float) -> np.ndarray:
        raise NotImplementedError

    def compute_delta(self, dc: float, rho: np.ndarray):
        raise NotImplementedError

    def assemble_profile(self, dc: float, rho: np.ndarray, rest) -> DensityProfile:
        delta, mu = rest
        return DensityProfile(
            dc=dc, rho=rho, delta=delta, mu=mu,
            resolved=np.ones(rho.shape[0], dtype=bool),
        )

    def profile(self, dc: float) -> DensityProfile:
        rho = self.compute_rho(dc)
        rest = self.compute_delta(dc, rho)
        return self.assemble_profile(dc, rho, rest)

    def estimated_bytes(self) -> int:
        return 0


class OracleBackend(_ExactBackendBase):
    name = "oracle"

    def __init__(self, ds: Dataset):
        self.ds = ds

    def compute_rho(self, dc):
        return oracle_rho(self.ds, dc)

    def compute_delta(self, dc, rho):
        return oracle_delta(self.ds, rho)


class ListBackend(_ExactBackendBase):
    name = "list"

    def __init__(self, ds: Dataset | None, nl=None):
        self.ds = ds
        if nl is None and ds is None:
            raise UsageError("either a dataset or a prebuilt index is required")
        self.nl = nl if nl is not None else build_list_index(ds)

    @classmethod
    def from_index(cls, nl):
        return cls(None, nl=nl)

    def compute_rho(self, dc):
        return rho_rows(self.nl.dists, dc)

    def compute_delta(self, dc, rho):
        rank = rank_positions(rho)
        pids = np.arange(self.nl.n, dtype=np.int64)
        delta, mu, _ = delta_scan_rows(self.nl.ids, self.nl.dists, pids, rank)
        return delta, mu

    def estimated_bytes(self):
        return self.nl.estimated_bytes()


class CHBackend(ListBackend):
    name = "ch"

    def __init__(self, ds: Dataset | None, w: float | None, nl=None, ch=None):
        super().__init__(ds, nl=nl)
        if ch is not None:
            self.ch = ch
        else:
            if w is None:
                raise UsageError("the ch index requires a bin width w")
            self.ch = build_ch_index(self.nl, w)

    @classmethod
    def from_index(cls, nl, ch):
        return cls(None, None, nl=nl, ch=ch)

    def compute_rho(self, dc):
        return ch_rho_all(self.ch, self.nl, dc)

    def estimated_bytes(self):
        return super().estimated_bytes() + self.ch.estimated_bytes()


class ApproxListBackend:
    """Truncated-list mode; delta may be unresolved and dc > tau degrades rho."""

    name = "list"

    def __init__(self, ds: Dataset | None, tau: float | None = None,
                 w: float | None = None, rn=None):
        self.ds = ds
        self.rn = rn if rn is not None else build_rn_list(ds, tau, w=w)
        if self.rn.ch is not None:
            self.name = "ch"

    @classmethod
    def from_index(cls, rn):
        return cls(None, rn=rn)

    def profile(self, dc: float) -> DensityProfile:
        rho = self.compute_rho(dc)
        return self.assemble_profile(dc, rho, self.compute_delta(dc, rho))

    def compute_rho(self, dc):
        return rn_rho(self.rn, dc)

    def compute_delta(self, dc, rho):
        delta, mu, resolved = rn_delta(self.rn, rank_positions(rho))
        return delta, mu, resolved, dc > self.rn.tau

    def assemble_profile(self, dc, rho, rest):
        delta, mu, resolved, degraded = rest
        return DensityProfile(dc=dc, rho=rho, delta=delta, mu=mu,
                              resolved=resolved, degraded=degraded)

    def estimated_bytes(self):
        return self.rn.estimated_bytes()


class _TreeBackendBase(_ExactBackendBase):
    tree = None

    def compute_rho(self, dc):
        return tree_rho_all(self.tree, dc)

    def compute_delta(self, dc, rho):
        annotate_maxrho(self.tree, rho)
        return tree_delta_all(self.tree, rho)

    def estimated_bytes(self):
        return self.tree.estimated_bytes()


class QuadtreeBackend(_TreeBackendBase):
    name = "quadtree"

    def __init__(self, ds: Dataset | None, capacity: int | None = None,
                 max_depth: int | None = None, tree=None):
        self.ds = ds
        if tree is not None:
            self.tree = tree
        else:
            cfg = QuadConfig(
                leaf_capacity=capacity if capacity is not None else 64,
                max_depth=max_depth if max_depth is not None else 32,
            )
            self.tree = build_quadtree(ds, cfg)

    @classmethod
    def from_index(cls, tree):
        return cls(None, tree=tree)


class RTreeBackend(_TreeBackendBase):
    name = "rtree"

    def __init__(self, ds: Dataset | None, fanout: int | None = None, tree=None):
        self.ds = ds
        if tree is not None:
            self.tree = tree
        else:
            self.tree = build_rtree(ds, RTreeConfig(fanout=fanout if fanout is not None else 64))

    @classmethod
    def from_index(cls, tree):
        return cls(None, tree=tree)


def build_backend(
    name: str,
    ds: Dataset,
    w: float | None = None,
    tau: float | None = None,
    capacity: int | None = None,
    max_depth: int | None = None,
    fanout: int | None = None,
):
    if name not in BACKEND_NAMES:
        raise UsageError(f"unknown index backend: {name!r}")
    if tau is not None and name not in ("list", "ch"):
        raise UsageError("--tau applies only to the list-based indexes")
    if w is not None and name != "ch":
        raise UsageError("--w applies only to the ch index")
    if capacity is not None and name != "quadtree":
        raise UsageError("--capacity applies only to the quadtree index")
    if fanout is not None and name != "rtree":
        raise UsageError("--fanout applies only to the rtree index")
    if name == "oracle":
        return OracleBackend(ds)
    if name == "list":
        if tau is not None:
            return ApproxListBackend(ds, tau)
        return ListBackend(ds)
    if name == "ch":
        if w is None:
            raise UsageError("the ch index requires --w")
        if tau is not None:
            return ApproxListBackend(ds, tau, w=w)
        return CHBackend(ds, w)
    if name == "quadtree":
        return QuadtreeBackend(ds, capacity=capacity, max_depth=max_depth)
    return RTreeBackend(ds, fanout=fanout)
