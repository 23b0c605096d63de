"""Command-line interface.

Exit codes: 0 ok, 1 runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .backends import build_backend
from .clustering import CenterSelection, Clustering, assign, flag_outliers, select_centers
from .dataset import GeneratorSpec, generate, load_csv, save_csv
from .errors import UsageError
from .evaluation import bench_suite, format_table, pair_metrics, reports_to_json
from .profile import DensityProfile
from .storage import load_index, save_index

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="dpcidx", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate synthetic data")
    p.add_argument("--blobs", type=int, default=None, metavar="K",
                   help="number of gaussian blobs (omit for a uniform box)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--spread", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--labels-out", default=None,
                   help="write generator labels as a reference clustering JSON")

    p = sub.add_parser("build", help="build and serialize an index")
    p.add_argument("--input", required=True)
    p.add_argument("--index", required=True,
                   choices=["list", "ch", "quadtree", "rtree"])
    p.add_argument("--w", type=float, default=None, help="ch bin width")
    p.add_argument("--tau", type=float, default=None,
                   help="truncate lists at this radius (approximate mode)")
    p.add_argument("--capacity", type=int, default=None, help="quadtree leaf capacity")
    p.add_argument("--fanout", type=int, default=None, help="rtree node fanout")
    p.add_argument("--out", required=True)

    p = sub.add_parser("profile", help="compute rho/delta under a cutoff")
    p.add_argument("--index", required=True, help="serialized index file")
    p.add_argument("--dc", type=float, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("cluster", help="select centers and assign labels")
    p.add_argument("--profile", required=True)
    p.add_argument("--centers", default=None, help="comma-separated center ids")
    p.add_argument("--topk", type=int, default=None)
    p.add_argument("--rho-min", type=float, default=None)
    p.add_argument("--delta-min", type=float, default=None)
    p.add_argument("--outlier-rho-max", type=int, default=None)
    p.add_argument("--outlier-delta-min", type=float, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="pairwise precision/recall/F1")
    p.add_argument("--clustering", required=True)
    p.add_argument("--reference", required=True)

    p = sub.add_parser("bench", help="build/query timings per backend")
    p.add_argument("--input", required=True)
    p.add_argument("--dc", type=float, required=True)
    p.add_argument("--indexes", default="list,ch,quadtree,rtree,oracle")
    p.add_argument("--w", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--capacity", type=int, default=None)
    p.add_argument("--fanout", type=int, default=None)
    p.add_argument("--json", default=None, help="also write the reports as JSON")

    p = sub.add_parser("serve", help="start the HTTP API for the decision-graph UI")
    p.add_argument("--input", required=True)
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--host", default="127.0.0.1")

    return top


def _cmd_gen(args) -> int:
    kind = "blobs" if args.blobs is not None else "uniform"
    spec = GeneratorSpec(kind=kind, n=args.n, d=args.d,
                         k=args.blobs if args.blobs is not None else 1,
                         spread=args.spread, seed=args.seed)
    ds, labels = generate(spec)
    save_csv(ds, args.out)
    print(f"wrote {ds.n} points (d={ds.dim}) to {args.out}")
    if args.labels_out:
        ref = Clustering(dc=0.0, centers=np.unique(labels),
                         labels=labels.astype(np.int64))
        with open(args.labels_out, "w", encoding="utf-8") as fh:
            json.dump(ref.to_json_dict(), fh)
        print(f"wrote reference labels to {args.labels_out}")
    return EXIT_OK


def _cmd_build(args) -> int:
    ds = load_csv(args.input)
    t0 = time.perf_counter()
    backend = build_backend(args.index, ds, w=args.w, tau=args.tau,
                            capacity=args.capacity, fanout=args.fanout)
    build_s = time.perf_counter() - t0
    save_index(backend, args.out, d=ds.dim)
    stats = {
        "index": args.index,
        "n": ds.n,
        "d": ds.dim,
        "build_seconds": round(build_s, 6),
        "index_bytes": backend.estimated_bytes(),
    }
    tree = getattr(backend, "tree", None)
    if tree is not None:
        stats["nodes"] = tree.n_nodes
        stats["height"] = tree.height
    print(json.dumps(stats))
    return EXIT_OK


def _cmd_profile(args) -> int:
    if args.dc <= 0:
        raise UsageError("--dc must be positive")
    backend = load_index(args.index)
    prof = backend.profile(args.dc)
    if prof.degraded:
        print("warning: dc exceeds the index tau; rho is a lower bound",
              file=sys.stderr)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(prof.to_json_dict(), fh)
    print(f"wrote profile for dc={args.dc} ({prof.n} objects) to {args.out}")
    return EXIT_OK


def _selection_from_args(args) -> CenterSelection:
    picked = [
        args.centers is not None,
        args.topk is not None,
        args.rho_min is not None or args.delta_min is not None,
    ]
    if sum(picked) != 1:
        raise UsageError(
            "choose exactly one of --centers, --topk, or --rho-min/--delta-min")
    if args.centers is not None:
        try:
            ids = tuple(int(x) for x in args.centers.split(",") if x.strip())
        except ValueError:
            raise UsageError("--centers must be comma-separated integers") from None
        return CenterSelection(mode="explicit", ids=ids)
    if args.topk is not None:
        return CenterSelection(mode="topk", k=args.topk)
    if args.rho_min is None or args.delta_min is None:
        raise UsageError("threshold mode needs both --rho-min and --delta-min")
    return CenterSelection(mode="threshold", rho_min=args.rho_min,
                           delta_min=args.delta_min)


def _cmd_cluster(args) -> int:
    with open(args.profile, "r", encoding="utf-8") as fh:
        prof = DensityProfile.from_json_dict(json.load(fh))
    sel = _selection_from_args(args)
    centers = select_centers(prof, sel)
    clustering = assign(prof, centers)
    if args.outlier_rho_max is not None and args.outlier_delta_min is not None:
        clustering.outliers = flag_outliers(
            prof, args.outlier_rho_max, args.outlier_delta_min)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(clustering.to_json_dict(), fh)
    sizes = clustering.cluster_sizes()
    print(f"{centers.size} clusters, sizes {sizes.tolist()}, "
          f"{clustering.unassigned_ids().size} unassigned")
    return EXIT_OK


def _cmd_eval(args) -> int:
    with open(args.clustering, "r", encoding="utf-8") as fh:
        c = Clustering.from_json_dict(json.load(fh))
    with open(args.reference, "r", encoding="utf-8") as fh:
        g = Clustering.from_json_dict(json.load(fh))
    precision, recall, f1 = pair_metrics(c, g)
    print(f"precision={precision:.6f} recall={recall:.6f} f1={f1:.6f}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    ds = load_csv(args.input)
    names = [x.strip() for x in args.indexes.split(",") if x.strip()]
    params = {}
    if args.w is not None:
        params["w"] = args.w
    if args.tau is not None:
        params["tau"] = args.tau
    if args.capacity is not None:
        params["capacity"] = args.capacity
    if args.fanout is not None:
        params["fanout"] = args.fanout
    reports = []
    for name in names:
        kw = dict(params)
        if name != "ch":
            kw.pop("w", None)
        if name not in ("list", "ch"):
            kw.pop("tau", None)
        if name != "quadtree":
            kw.pop("capacity", None)
        if name != "rtree":
            kw.pop("fanout", None)
        if name == "ch" and "w" not in kw:
            kw["w"] = ds.diameter_bound() / 64  # default bin width
        reports.extend(bench_suite(ds, args.dc, [name], **kw))
    print(format_table(reports))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(reports_to_json(reports))
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    ds = load_csv(args.input)
    app = create_app(ds)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen,
    "build": _cmd_build,
    "profile": _cmd_profile,
    "cluster": _cmd_cluster,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, RuntimeError, MemoryError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
