"""Binary persistence for built indexes.

List-family layout (little-endian):
  header: magic, u32 version, u32 n, u32 d, then format-specific fields
  list body: per object, u32 count then count * (u32 id, f64 distance)
  ch body:   per object, u32 nbins then nbins * u32 cumulative counts

Tree indexes embed their node arrays and the points (the queries need
coordinates) as a sequence of raw .npy blocks after the header.
"""

from __future__ import annotations

import struct

import numpy as np

from .backends import (
    ApproxListBackend,
    CHBackend,
    ListBackend,
    QuadtreeBackend,
    RTreeBackend,
)
from .chindex import CumulativeHistogram
from .errors import UsageError
from .listindex import NeighborList
from .rnlist import ReducedNeighborList
from .treenodes import SpatialTree

MAGIC_LIST = b"DPCL"
MAGIC_CH = b"DPCH"
MAGIC_RN = b"DPCN"
MAGIC_QUAD = b"DPCQ"
MAGIC_RTREE = b"DPCT"
VERSION = 1

_PAIR = np.dtype([("id", "<u4"), ("dist", "<f8")])
_HEADER = struct.Struct("<4sIII")


def _write_header(fh, magic: bytes, n: int, d: int) -> None:
    fh.write(_HEADER.pack(magic, VERSION, n, d))


def _read_header(fh) -> tuple[bytes, int, int]:
    magic, version, n, d = _HEADER.unpack(fh.read(_HEADER.size))
    if version != VERSION:
        raise UsageError(f"unsupported index version {version}")
    return magic, n, d


def _write_pair_rows(fh, rows) -> None:
    for ids_row, dists_row in rows:
        fh.write(struct.pack("<I", ids_row.shape[0]))
        rec = np.empty(ids_row.shape[0], dtype=_PAIR)
        rec["id"] = ids_row
        rec["dist"] = dists_row
        fh.write(rec.tobytes())


def _read_pair_rows(fh, n: int):
    id_parts, dist_parts = [], []
    offsets = np.zeros(n + 1, dtype=np.int64)
    for p in range(n):
        (count,) = struct.unpack("<I", fh.read(4))
        rec = np.frombuffer(fh.read(count * _PAIR.itemsize), dtype=_PAIR)
        id_parts.append(rec["id"].astype(np.int32))
        dist_parts.append(rec["dist"].astype(np.float64))
        offsets[p + 1] = offsets[p] + count
    return id_parts, dist_parts, offsets


def _write_count_rows(fh, ch: CumulativeHistogram) -> None:
    for p in range(ch.n):
        row = ch.row(p)
        fh.write(struct.pack("<I", row.shape[0]))
        fh.write(row.astype("<u4").tobytes())


def _read_count_rows(fh, n: int, w: float) -> CumulativeHistogram:
    parts = []
    offsets = np.zeros(n + 1, dtype=np.int64)
    for p in range(n):
        (nbins,) = struct.unpack("<I", fh.read(4))
        row = np.frombuffer(fh.read(nbins * 4), dtype="<u4").astype(np.int64)
        parts.append(row)
        offsets[p + 1] = offsets[p] + nbins
    counts = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    return CumulativeHistogram(w=w, counts=counts, offsets=offsets)


_TREE_ARRAYS = ("lo", "hi", "first_child", "n_children", "leaf_start",
                "leaf_count", "nc", "perm")


def _write_tree(fh, magic: bytes, tree: SpatialTree, d: int) -> None:
    _write_header(fh, magic, tree.n, d)
    if magic == MAGIC_QUAD:
        fh.write(struct.pack("<III", tree.params["leaf_capacity"],
                             tree.params["max_depth"], tree.height))
    else:
        fh.write(struct.pack("<II", tree.params["fanout"], tree.height))
    np.save(fh, tree.points, allow_pickle=False)
    for name in _TREE_ARRAYS:
        np.save(fh, getattr(tree, name), allow_pickle=False)


def _read_tree(fh, magic: bytes, n: int, d: int) -> SpatialTree:
    if magic == MAGIC_QUAD:
        capacity, max_depth, height = struct.unpack("<III", fh.read(12))
        kind = "quadtree"
        params = {"leaf_capacity": capacity, "max_depth": max_depth}
    else:
        fanout, height = struct.unpack("<II", fh.read(8))
        kind = "rtree"
        params = {"fanout": fanout}
    arrays = {"points": np.load(fh, allow_pickle=False)}
    for name in _TREE_ARRAYS:
        arrays[name] = np.load(fh, allow_pickle=False)
    return SpatialTree(kind=kind, height=height, params=params, **arrays)


def save_index(backend, path, d: int | None = None) -> None:
    """Serialize a built backend; d is required for list-family backends
    whose structures do not carry coordinates."""
    with open(path, "wb") as fh:
        if isinstance(backend, ApproxListBackend):
            rn = backend.rn
            _write_header(fh, MAGIC_RN, rn.n, d or 0)
            has_ch = rn.ch is not None
            fh.write(struct.pack("<ddBd", rn.tau, rn.sentinel_delta,
                                 1 if has_ch else 0, rn.ch.w if has_ch else 0.0))
            rows = ((rn.ids[rn.offsets[p]:rn.offsets[p + 1]],
                     rn.dists[rn.offsets[p]:rn.offsets[p + 1]]) for p in range(rn.n))
            _write_pair_rows(fh, rows)
            if has_ch:
                _write_count_rows(fh, rn.ch)
        elif isinstance(backend, CHBackend):
            nl = backend.nl
            _write_header(fh, MAGIC_CH, nl.n, d or 0)
            fh.write(struct.pack("<d", backend.ch.w))
            _write_pair_rows(fh, ((nl.ids[p], nl.dists[p]) for p in range(nl.n)))
            _write_count_rows(fh, backend.ch)
        elif isinstance(backend, ListBackend):
            nl = backend.nl
            _write_header(fh, MAGIC_LIST, nl.n, d or 0)
            _write_pair_rows(fh, ((nl.ids[p], nl.dists[p]) for p in range(nl.n)))
        elif isinstance(backend, QuadtreeBackend):
            _write_tree(fh, MAGIC_QUAD, backend.tree, backend.tree.points.shape[1])
        elif isinstance(backend, RTreeBackend):
            _write_tree(fh, MAGIC_RTREE, backend.tree, backend.tree.points.shape[1])
        else:
            raise UsageError(f"backend {type(backend).__name__} is not serializable")


def _rect_rows(id_parts, dist_parts, n: int) -> NeighborList:
    width = id_parts[0].shape[0] if n else 0
    ids = np.vstack(id_parts).reshape(n, width) if n else np.zeros((0, 0), np.int32)
    dists = np.vstack(dist_parts).reshape(n, width) if n else np.zeros((0, 0))
    return NeighborList(ids=ids.astype(np.int32), dists=dists.astype(np.float64))


def load_index(path):
    """Load a serialized index and wrap it in its query backend."""
    with open(path, "rb") as fh:
        magic, n, d = _read_header(fh)
        if magic == MAGIC_LIST:
            id_parts, dist_parts, _ = _read_pair_rows(fh, n)
            return ListBackend.from_index(_rect_rows(id_parts, dist_parts, n))
        if magic == MAGIC_CH:
            (w,) = struct.unpack("<d", fh.read(8))
            id_parts, dist_parts, _ = _read_pair_rows(fh, n)
            nl = _rect_rows(id_parts, dist_parts, n)
            return CHBackend.from_index(nl, _read_count_rows(fh, n, w))
        if magic == MAGIC_RN:
            tau, sentinel, has_ch, w = struct.unpack("<ddBd", fh.read(25))
            id_parts, dist_parts, offsets = _read_pair_rows(fh, n)
            ch = _read_count_rows(fh, n, w) if has_ch else None
            rn = ReducedNeighborList(
                tau=tau,
                sentinel_delta=sentinel,
                ids=np.concatenate(id_parts) if id_parts else np.zeros(0, np.int32),
                dists=np.concatenate(dist_parts) if dist_parts else np.zeros(0),
                offsets=offsets,
                ch=ch,
            )
            return ApproxListBackend.from_index(rn)
        if magic in (MAGIC_QUAD, MAGIC_RTREE):
            tree = _read_tree(fh, magic, n, d)
            if magic == MAGIC_QUAD:
                return QuadtreeBackend.from_index(tree)
            return RTreeBackend.from_index(tree)
        raise UsageError(f"not a dpcidx index file: bad magic {magic!r}")
