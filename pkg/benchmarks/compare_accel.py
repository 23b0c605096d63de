"""Compare the jitted kernels against the pure-numpy fallback.

Runs the rho and delta phases of every backend twice, once per path
(the fallback is selected by re-invoking this script with
DPCIDX_NO_NUMBA=1), verifies the profile hashes match, and prints the
wall-clock ratio.

Usage: python benchmarks/compare_accel.py [--n 4000] [--dc 1.0]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def measure(n: int, dc: float) -> dict:
    from dpcidx._accel import NUMBA_ENABLED
    from dpcidx.backends import build_backend
    from dpcidx.dataset import GeneratorSpec, generate

    ds, _ = generate(GeneratorSpec(kind="blobs", n=n, d=2, k=max(2, n // 500), seed=13))
    out = {"numba": NUMBA_ENABLED, "rows": []}
    for name, kw in [("list", {}), ("ch", {"w": 0.4}),
                     ("quadtree", {}), ("rtree", {})]:
        backend = build_backend(name, ds, **kw)
        backend.profile(dc)  # warm-up (JIT compile on the numba path)
        t0 = time.perf_counter()
        rho = backend.compute_rho(dc)
        t1 = time.perf_counter()
        rest = backend.compute_delta(dc, rho)
        t2 = time.perf_counter()
        prof = backend.assemble_profile(dc, rho, rest)
        out["rows"].append({
            "index": name,
            "rho_s": t1 - t0,
            "delta_s": t2 - t1,
            "hash": prof.content_hash(),
        })
    return out


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=4000)
    ap.add_argument("--dc", type=float, default=1.0)
    ap.add_argument("--emit-json", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.emit_json:
        print(json.dumps(measure(args.n, args.dc)))
        return 0

    fast = measure(args.n, args.dc)
    env = dict(os.environ, DPCIDX_NO_NUMBA="1")
    proc = subprocess.run(
        [sys.executable, __file__, "--n", str(args.n), "--dc", str(args.dc),
         "--emit-json"],
        capture_output=True, text=True, env=env, check=True,
    )
    slow = json.loads(proc.stdout.strip().splitlines()[-1])
    assert fast["numba"] and not slow["numba"], "path selection failed"

    print(f"n={args.n} dc={args.dc}  (times in seconds)")
    header = f"{'index':<10}{'numba rho':>12}{'numpy rho':>12}{'numba delta':>13}{'numpy delta':>13}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for a, b in zip(fast["rows"], slow["rows"]):
        assert a["hash"] == b["hash"], f"{a['index']}: paths disagree"
        fast_t = a["rho_s"] + a["delta_s"]
        slow_t = b["rho_s"] + b["delta_s"]
        print(f"{a['index']:<10}{a['rho_s']:>12.4f}{b['rho_s']:>12.4f}"
              f"{a['delta_s']:>13.4f}{b['delta_s']:>13.4f}{slow_t / fast_t:>8.1f}x")
    print("profile hashes identical on both paths")
    return 0


if __name__ == "__main__":
    sys.exit(main())
