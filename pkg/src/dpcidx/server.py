"""HTTP API consumed by the decision-graph UI.

One dataset per process.  Index backends are built lazily and cached; the
profile for each (dc, index, tau) is cached so a cluster request can reuse
the profile the client just inspected.  Profile computation holds a lock
because the tree backends re-annotate maxrho per dc (single-writer phase);
cached responses are served without the lock.
"""

from __future__ import annotations

import threading
import time

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .backends import BACKEND_NAMES, build_backend
from .clustering import CenterSelection, assign, select_centers
from .dataset import Dataset
from .errors import UsageError
from .profile import DensityProfile

SAMPLE_SEED = 824517


class ProfileRequest(BaseModel):
    dc: float
    index: str = "rtree"
    tau: float | None = None


class ClusterRequest(BaseModel):
    dc: float
    index: str | None = None
    tau: float | None = None
    centers: list[int] | None = None
    topk: int | None = None
    rho_min: float | None = None
    delta_min: float | None = None


class _State:
    def __init__(self, ds: Dataset):
        self.ds = ds
        self.lock = threading.Lock()
        self.backends: dict[tuple, object] = {}
        self.profiles: dict[tuple, DensityProfile] = {}
        self.timings: dict[tuple, dict] = {}
        self.last_key_for_dc: dict[float, tuple] = {}

    def backend(self, index: str, tau: float | None):
        key = (index, tau)
        b = self.backends.get(key)
        if b is None:
            b = build_backend(index, self.ds, tau=tau)
            self.backends[key] = b
        return b

    def profile_for(self, dc: float, index: str, tau: float | None):
        key = (dc, index, tau)
        cached = self.profiles.get(key)
        if cached is not None:
            return cached, self.timings[key]
        with self.lock:
            cached = self.profiles.get(key)
            if cached is not None:
                return cached, self.timings[key]
            backend = self.backend(index, tau)
            t0 = time.perf_counter()
            rho = backend.compute_rho(dc)
            t1 = time.perf_counter()
            rest = backend.compute_delta(dc, rho)
            t2 = time.perf_counter()
            prof = backend.assemble_profile(dc, rho, rest)
            timings = {"rho_seconds": t1 - t0, "delta_seconds": t2 - t1}
            self.profiles[key] = prof
            self.timings[key] = timings
            self.last_key_for_dc[dc] = key
            return prof, timings


def create_app(ds: Dataset) -> FastAPI:
    state = _State(ds)
    app = FastAPI(title="dpcidx")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/summary")
    def summary():
        bbox = ds.bbox
        return {
            "n": ds.n,
            "d": ds.dim,
            "bbox": {"lo": bbox.lo.tolist(), "hi": bbox.hi.tolist()},
            "indexes": list(BACKEND_NAMES),
        }

    @app.post("/api/profile")
    def profile(req: ProfileRequest):
        if req.dc <= 0:
            raise HTTPException(status_code=400, detail="dc must be positive")
        if req.index not in BACKEND_NAMES:
            raise HTTPException(status_code=400, detail=f"unknown index {req.index!r}")
        if req.tau is not None and req.tau <= 0:
            raise HTTPException(status_code=400, detail="tau must be positive")
        try:
            prof, timings = state.profile_for(req.dc, req.index, req.tau)
        except UsageError as e:
            raise HTTPException(status_code=400, detail=str(e)) from None
        return {
            "dc": req.dc,
            "index": req.index,
            "tau": req.tau,
            "n": prof.n,
            "rho": prof.rho.tolist(),
            "delta": prof.delta.tolist(),
            "mu": prof.mu.tolist(),
            "resolved": prof.resolved.tolist(),
            "gamma": prof.gamma().tolist(),
            "degraded": prof.degraded,
            "timings": timings,
        }

    @app.post("/api/cluster")
    def cluster(req: ClusterRequest):
        if req.index is not None:
            key = (req.dc, req.index, req.tau)
        else:
            key = state.last_key_for_dc.get(req.dc)
        prof = state.profiles.get(key) if key else None
        if prof is None:
            raise HTTPException(
                status_code=409,
                detail=f"no cached profile for dc={req.dc}; request /api/profile first",
            )
        try:
            if req.centers is not None:
                sel = CenterSelection(mode="explicit", ids=tuple(req.centers))
            elif req.topk is not None:
                sel = CenterSelection(mode="topk", k=req.topk)
            elif req.rho_min is not None and req.delta_min is not None:
                sel = CenterSelection(
                    mode="threshold", rho_min=req.rho_min, delta_min=req.delta_min)
            else:
                raise UsageError("provide centers, topk, or rho_min/delta_min")
            centers = select_centers(prof, sel)
            clustering = assign(prof, centers)
        except UsageError as e:
            raise HTTPException(status_code=400, detail=str(e)) from None
        body = clustering.to_json_dict()
        body["sizes"] = clustering.cluster_sizes().tolist()
        body["index"] = key[1]
        body["tau"] = key[2]
        return body

    @app.get("/api/points")
    def points(sample: int | None = None):
        n = ds.n
        if sample is None or sample >= n:
            ids = np.arange(n)
        elif sample < 1:
            raise HTTPException(status_code=400, detail="sample must be >= 1")
        else:
            rng = np.random.default_rng(SAMPLE_SEED)
            ids = np.sort(rng.choice(n, size=sample, replace=False))
        return {
            "total": n,
            "ids": ids.tolist(),
            "points": ds.points[ids].tolist(),
        }

    return app
