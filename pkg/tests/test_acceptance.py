"""Acceptance gate: one test per release criterion, each printing a
PASS/FAIL line with the measured figure so runs double as reports.

Run with `pytest tests/test_acceptance.py -v -s`.
"""

import json
import time

import numpy as np
import pytest

from dpcidx.backends import build_backend
from dpcidx.chindex import build_ch_index, ch_rho_all, ch_rho_rows, ch_rows_from_dists
from dpcidx.cli import main as cli_main
from dpcidx.clustering import CenterSelection, assign, select_centers
from dpcidx.dataset import GeneratorSpec, generate
from dpcidx.evaluation import pair_metrics
from dpcidx.listindex import build_list_index, delta_scan_rows, neighbor_rows
from dpcidx.oracle import oracle_profile, oracle_rho
from dpcidx.profile import NO_MU, rank_positions
from dpcidx.quadtree import QuadConfig, build_quadtree
from dpcidx.rnlist import approx_profile, build_rn_list
from dpcidx.rtree import RTreeConfig, build_rtree
from dpcidx.treenodes import annotate_maxrho
from dpcidx.treequery import tree_delta_all_instrumented, tree_rho_all

from conftest import enumerate_pair_counts


def _report(name: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'}: {name} ({detail})")
    assert ok, f"{name}: {detail}"


def test_oracle_equivalence_all_backends():
    """All four index backends replicate the brute-force profile exactly
    over >= 200 randomized datasets and cutoffs.  Zero tolerance."""
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    trials = 200
    for trial in range(trials):
        n = int(np.exp(rng.uniform(np.log(50), np.log(2000))))
        d = int(rng.choice([2, 3]))
        kind = str(rng.choice(["blobs", "uniform"]))
        ds, _ = generate(GeneratorSpec(
            kind=kind, n=n, d=d, k=int(rng.integers(1, 8)),
            seed=int(rng.integers(2**31))))
        diag = ds.diameter_bound()
        u = rng.random()
        if u < 0.15:
            dc = diag * 1e-8  # below any pairwise distance
        elif u < 0.3:
            dc = diag * 1.25  # above the diameter
        else:
            dc = float(diag * 10 ** rng.uniform(-3.5, 0.0))
        ref = oracle_profile(ds, dc)
        backends = [
            ("list", {}),
            ("ch", {"w": float(diag * 10 ** rng.uniform(-2.5, -0.3))}),
            ("quadtree", {"capacity": int(rng.integers(1, 128))}),
            ("rtree", {"fanout": int(rng.integers(2, 128))}),
        ]
        for name, kw in backends:
            prof = build_backend(name, ds, **kw).profile(dc)
            assert prof.equals_exactly(ref), (
                f"trial {trial}: {name} diverges from oracle "
                f"(n={n} d={d} kind={kind} dc={dc})")
    _report("oracle equivalence", True,
            f"{trials} trials x 4 backends, {time.perf_counter() - t0:.1f}s")


def test_ch_bin_edge_exactness():
    """ch rho equals oracle rho with dc exactly at k*w and at k*w +/- 1 ulp
    on 50 random datasets.  Zero tolerance."""
    rng = np.random.default_rng(77)
    checked = 0
    for trial in range(50):
        n = int(rng.integers(20, 300))
        ds, _ = generate(GeneratorSpec(
            kind=str(rng.choice(["blobs", "uniform"])), n=n, d=2,
            k=int(rng.integers(1, 5)), seed=int(rng.integers(2**31))))
        diag = ds.diameter_bound()
        w = float(diag * 10 ** rng.uniform(-2.0, -0.3))
        nl = build_list_index(ds)
        ch = build_ch_index(nl, w)
        for k in (1, 2, 3, 5, int(rng.integers(1, 40))):
            edge = k * w
            for dc in (edge, np.nextafter(edge, 0.0), np.nextafter(edge, np.inf)):
                got = ch_rho_all(ch, nl, dc)
                want = oracle_rho(ds, dc)
                assert np.array_equal(got, want), (
                    f"trial {trial}: mismatch at dc={dc!r} (k={k}, w={w!r})")
                checked += 1
    _report("ch bin-edge exactness", True, f"{checked} edge cutoffs verified")


def test_pruning_soundness_and_effectiveness():
    """Disabling either pruning never changes delta/mu; with both prunings
    on, the delta pass visits < 50% of the leaves the unpruned run visits."""
    ds, _ = generate(GeneratorSpec(kind="blobs", n=5000, d=2, k=3, seed=20))
    dc = 1.0
    worst = 0.0
    for tree in (build_quadtree(ds, QuadConfig(leaf_capacity=32)),
                 build_rtree(ds, RTreeConfig(fanout=32))):
        rho = tree_rho_all(tree, dc)
        annotate_maxrho(tree, rho)
        rank = rank_positions(rho)
        runs = {}
        for dens, dist_ in ((True, True), (False, True), (True, False), (False, False)):
            runs[(dens, dist_)] = tree_delta_all_instrumented(
                tree, rho, rank, use_density=dens, use_distance=dist_)
        base_delta, base_mu = runs[(True, True)][:2]
        for key, (delta, mu, nodes, leaves) in runs.items():
            assert np.array_equal(delta, base_delta), f"delta changed with {key}"
            assert np.array_equal(mu, base_mu), f"mu changed with {key}"
        pruned = runs[(True, True)][3].sum()
        unpruned = runs[(False, False)][3].sum()
        assert runs[(True, True)][2].sum() <= runs[(False, False)][2].sum()
        ratio = pruned / unpruned
        worst = max(worst, ratio)
        assert ratio < 0.5, f"{tree.kind}: pruned/unpruned leaf ratio {ratio:.3f}"
    _report("pruning soundness and effectiveness", True,
            f"worst leaf-visit ratio {worst:.4f} (< 0.5)")


def test_approximation_quality():
    """With tau >= dc and < 5% unresolved, the truncated-index clustering
    matches the exact one at P, R, F1 >= 0.98; tau below dc collapses F1."""
    ds, _ = generate(GeneratorSpec(kind="blobs", n=5000, d=2, k=3, seed=20))
    dc = 1.0
    sel = CenterSelection(mode="topk", k=3)
    exact = oracle_profile(ds, dc)
    exact_clustering = assign(exact, select_centers(exact, sel))

    good = approx_profile(build_rn_list(ds, tau=2.0), dc)
    unresolved = float((~good.resolved).sum()) / ds.n
    assert unresolved < 0.05, f"{unresolved:.2%} unresolved"
    gc = assign(good, select_centers(good, sel))
    p, r, f1 = pair_metrics(gc, exact_clustering)
    assert p >= 0.98 and r >= 0.98 and f1 >= 0.98, (p, r, f1)

    bad = approx_profile(build_rn_list(ds, tau=0.3), dc)
    assert bad.degraded
    bc = assign(bad, select_centers(bad, sel))
    _, _, f1_bad = pair_metrics(bc, exact_clustering)
    assert f1_bad < 0.9, f"collapse not observed: F1={f1_bad:.3f}"
    _report("approximation quality", True,
            f"P={p:.4f} R={r:.4f} F1={f1:.4f}, unresolved {unresolved:.2%}; "
            f"tau<dc gives F1={f1_bad:.3f}")


def test_scaling_shape():
    """At fixed point density and fixed w/dc, the CH in-bin work per object
    stays bounded as n grows 16x, and the list delta scan length over
    non-peaks stays under 5% of n.  Streams blocks to cap memory."""
    dc = 1.1
    w = 0.4
    block = 256

    def stats(n: int):
        k = max(2, n // 500)  # blob count grows so local density is fixed
        ds, _ = generate(GeneratorSpec(kind="blobs", n=n, d=2, k=k, seed=5))
        rho = oracle_rho(ds, dc)
        rank = rank_positions(rho)
        comp_total = 0
        scan_total = 0
        scan_objs = 0
        for s in range(0, n, block):
            e = min(s + block, n)
            pids = np.arange(s, e)
            ids_b, dists_b = neighbor_rows(ds.points, pids)
            counts, offsets = ch_rows_from_dists(dists_b, w)
            rho_b, comps = ch_rho_rows(counts, offsets, dists_b, w, dc)
            assert np.array_equal(rho_b, rho[s:e])
            comp_total += int(comps.sum())
            _, mu_b, scans = delta_scan_rows(ids_b, dists_b, pids, rank)
            found = mu_b != NO_MU
            scan_total += int(scans[found].sum())
            scan_objs += int(found.sum())
        return comp_total / n, scan_total / max(scan_objs, 1)

    t0 = time.perf_counter()
    comp_1k, _ = stats(1000)
    comp_16k, scan_16k = stats(16000)
    took = time.perf_counter() - t0
    assert comp_16k < 2.0 * comp_1k, (
        f"in-bin comparisons grew {comp_16k / comp_1k:.2f}x over 1000->16000")
    assert scan_16k < 0.05 * 16000, f"mean delta scan {scan_16k:.1f} >= 5% of n"
    _report("scaling shape", True,
            f"CH comparisons/object {comp_1k:.1f} -> {comp_16k:.1f} "
            f"(x{comp_16k / comp_1k:.2f}); scan {scan_16k:.1f}/16000; {took:.0f}s")


def test_metric_unit():
    """Worked pair-metric example plus agreement with direct enumeration on
    100 random label vectors.  Zero tolerance."""
    p, r, f1 = pair_metrics([0, 0, 1, 1], [0, 0, 0, 1])
    assert p == 0.5 and abs(r - 1 / 3) < 1e-15 and abs(f1 - 0.4) < 1e-15
    rng = np.random.default_rng(99)
    for _ in range(100):
        n = int(rng.integers(1, 300))
        c = rng.integers(-1, 6, n)
        g = rng.integers(-1, 6, n)
        from dpcidx.evaluation import pair_confusion

        pc = pair_confusion(c, g)
        tp, fp, fn = enumerate_pair_counts(c, g)
        assert (pc.tp, pc.fp, pc.fn) == (tp, fp, fn)
    _report("metric unit", True, "worked example + 100 enumeration checks")


def test_cli_golden_end_to_end(tmp_path):
    """gen -> build(rtree) -> profile -> cluster(topk 3) -> eval reaches
    F1 >= 0.95 against the generator labels; outputs are byte-identical
    across two runs."""
    outputs = {}
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        data, labels = d / "data.csv", d / "labels.json"
        idx, prof, clus = d / "rtree.idx", d / "profile.json", d / "clusters.json"
        assert cli_main(["gen", "--blobs", "3", "--n", "300", "--seed", "7",
                         "--out", str(data), "--labels-out", str(labels)]) == 0
        assert cli_main(["build", "--input", str(data), "--index", "rtree",
                         "--out", str(idx)]) == 0
        assert cli_main(["profile", "--index", str(idx), "--dc", "1.0",
                         "--out", str(prof)]) == 0
        assert cli_main(["cluster", "--profile", str(prof), "--topk", "3",
                         "--out", str(clus)]) == 0
        outputs[run] = (prof.read_bytes(), clus.read_bytes(),
                        json.loads(clus.read_text()), json.loads(labels.read_text()))
    assert outputs["a"][0] == outputs["b"][0], "profile JSON differs across runs"
    assert outputs["a"][1] == outputs["b"][1], "clustering JSON differs across runs"
    clustering, reference = outputs["a"][2], outputs["a"][3]
    p, r, f1 = pair_metrics(np.asarray(clustering["labels"]),
                            np.asarray(reference["labels"]))
    assert f1 >= 0.95, f"end-to-end F1 {f1:.4f} < 0.95"
    _report("cli golden end-to-end", True, f"F1={f1:.4f}, byte-identical reruns")
