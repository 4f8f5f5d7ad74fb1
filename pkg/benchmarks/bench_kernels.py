"""Compare the numba kernels against the pure-numpy fallback.

The backend is fixed at import time, so each one runs in its own
subprocess with PENCIL_PERSIST_DISABLE_NUMBA set accordingly.

    python3 benchmarks/bench_kernels.py --sizes 4 8 16 32 --repeat 20
"""

import argparse
import json
import os
import subprocess
import sys
import time


def worker(sizes, repeat):
    import numpy as np

    import pencil_persist as pp
    from pencil_persist import _kernels

    rng = np.random.default_rng(0)
    rows = []

    def timed(name, n, fn):
        fn()  # compile or warm caches
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn()
        rows.append({"case": name, "n": n, "ms": 1e3 * (time.perf_counter() - t0) / repeat})

    for n in sizes:
        m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = 0.5 * (m + m.conj().T)
        g = rng.standard_normal((n, n))
        v = 0.5 * (g + g.T)
        p = pp.pencil_from_eigenproblem(h, v, 0.0)
        timed("lu_factor", n, lambda: _kernels.lu_factor(m))
        timed("qr_pivoted", n, lambda: _kernels.qr_pivoted(m))
        timed("eigen_general", n, lambda: pp.eigen_general(m))
        timed("exceptional_set", n, lambda: pp.exceptional_set(p))
    timed("hunt(4, 5)", 4, lambda: pp.hunt(4, 5, seed=1))
    print(json.dumps({"backend": pp.BACKEND, "rows": rows}))


def run_backend(disable, sizes, repeat):
    env = dict(os.environ)
    env.pop("PENCIL_PERSIST_DISABLE_NUMBA", None)
    if disable:
        env["PENCIL_PERSIST_DISABLE_NUMBA"] = "1"
    cmd = [sys.executable, __file__, "--worker", "--repeat", str(repeat), "--sizes", *map(str, sizes)]
    out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout
    return json.loads(out.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 32])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        worker(args.sizes, args.repeat)
        return

    fast = run_backend(False, args.sizes, args.repeat)
    slow = run_backend(True, args.sizes, args.repeat)
    print(f"{'case':18s} {'n':>4s} {fast['backend']:>10s} {slow['backend']:>10s} {'speedup':>8s}")
    for a, b in zip(fast["rows"], slow["rows"]):
        print(f"{a['case']:18s} {a['n']:4d} {a['ms']:9.3f}ms {b['ms']:9.3f}ms {b['ms'] / a['ms']:7.1f}x")


if __name__ == "__main__":
    main()
