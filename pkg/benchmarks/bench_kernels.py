"""Compare the active kernel backend against the pure-numpy reference.

Run as `python3 benchmarks/bench_kernels.py [--repeat N]`.  With
THETA_CUBE_BACKEND=numpy both columns measure the same code path.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from thetacube import _kernels
from thetacube.fingroup import group_new
from thetacube.thetagroup import enumerate_cocycles, heisenberg


def best_of(repeat: int, fn, *args) -> float:
    fn(*args)  # warmup (JIT compile and cache)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    g3 = group_new((3, 3))
    fs = enumerate_cocycles(g3, 3)
    ext6 = heisenberg((6,))
    add6 = ext6.group.add_table
    t6 = _kernels.theta_table(ext6.table, add6, 6)
    rng = np.random.default_rng(7)
    mats = rng.integers(0, 7, size=(400, 400)).astype(np.int64)

    cases = [
        ("rank_mod_p 400x400 mod 7",
         _kernels.rank_mod_p, _kernels.rank_mod_p_numpy, (mats, 7)),
        ("cocycle_defect 36x36 mod 6",
         _kernels.cocycle_defect, _kernels.cocycle_defect_numpy, (ext6.table, add6, 6)),
        ("theta_table 36x36 mod 6",
         _kernels.theta_table, _kernels.theta_table_numpy, (ext6.table, add6, 6)),
        ("cubic_defect 36^3 mod 6",
         _kernels.cubic_defect, _kernels.cubic_defect_numpy, (t6, add6, 6)),
        (f"theta_cubic_batch {len(fs)} cocycles on (Z/3)^2",
         _kernels.theta_cubic_batch, _kernels.theta_cubic_batch_numpy, (fs, g3.add_table, 3)),
    ]

    print(f"backend: {_kernels.backend_name()}  (repeat={args.repeat}, best-of timing)")
    print(f"{'case':44s} {'backend':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, fast, ref, call in cases:
        assert np.array_equal(np.asarray(fast(*call)), np.asarray(ref(*call)))
        tb = best_of(args.repeat, fast, *call)
        tn = best_of(args.repeat, ref, *call)
        print(f"{name:44s} {tb * 1e3:9.2f}ms {tn * 1e3:9.2f}ms {tn / tb:7.1f}x")


if __name__ == "__main__":
    main()
