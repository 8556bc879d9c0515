"""Benchmark the jitted kernels against the pure-numpy fallback.

Each path runs in a fresh subprocess so module-level path selection
(ABUNDANCY_NO_NUMBA) is clean, and so numba compile time can be reported
separately from steady-state time. Both paths must produce identical
tables; the checksum printed per run is compared before timings are shown.

Usage: python3 benchmarks/bench_sieve.py [--nmax 2000000] [--ell 3] [--repeat 3]
"""

import argparse
import os
import subprocess
import sys

WORKER = r"""
import sys, time
nmax, ell = int(sys.argv[1]), int(sys.argv[2])
repeat = int(sys.argv[3])

t0 = time.perf_counter()
from abundancy import _kernels
from abundancy.sieve import sieve_b
sieve_b(ell, 64)  # triggers jit compilation on the numba path
compile_s = time.perf_counter() - t0

best = float("inf")
for _ in range(repeat):
    t0 = time.perf_counter()
    table = sieve_b(ell, nmax)
    best = min(best, time.perf_counter() - t0)

checksum = 0
for n in (1, 2, nmax // 3, nmax - 1, nmax):
    checksum = (checksum * 1000003 + table[n]) % (2**61 - 1)

import numpy as np
rng = np.random.default_rng(5)
a = rng.normal(size=1_000_000)
t0 = time.perf_counter()
for _ in range(repeat):
    _kernels.kahan_cumsum(a)
kahan_s = (time.perf_counter() - t0) / repeat

print(f"{_kernels.USING_NUMBA} {compile_s:.3f} {best:.4f} {kahan_s:.4f} {checksum}")
"""


def run_path(no_numba: bool, nmax: int, ell: int, repeat: int):
    env = dict(os.environ)
    env["ABUNDANCY_NO_NUMBA"] = "1" if no_numba else "0"
    res = subprocess.run(
        [sys.executable, "-c", WORKER, str(nmax), str(ell), str(repeat)],
        capture_output=True, text=True, env=env, check=True,
    )
    used, compile_s, sieve_s, kahan_s, checksum = res.stdout.split()
    return {
        "label": "numpy" if no_numba else ("numba" if used == "True" else "numpy"),
        "startup_s": float(compile_s),
        "sieve_s": float(sieve_s),
        "kahan_s": float(kahan_s),
        "checksum": checksum,
    }


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=2_000_000)
    ap.add_argument("--ell", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rows = [
        run_path(no_numba=False, nmax=args.nmax, ell=args.ell, repeat=args.repeat),
        run_path(no_numba=True, nmax=args.nmax, ell=args.ell, repeat=args.repeat),
    ]
    if rows[0]["checksum"] != rows[1]["checksum"]:
        print("checksum mismatch between kernel paths", file=sys.stderr)
        return 1

    print(f"sieve_b(ell={args.ell}, nmax={args.nmax}), best of {args.repeat}; "
          f"kahan_cumsum over 1e6 doubles")
    print(f"{'path':<8} {'startup(s)':>10} {'sieve(s)':>9} {'kahan(s)':>9}")
    for r in rows:
        print(f"{r['label']:<8} {r['startup_s']:>10.3f} {r['sieve_s']:>9.4f} "
              f"{r['kahan_s']:>9.4f}")
    if rows[1]["sieve_s"] > 0:
        print(f"sieve speedup (numpy/numba): "
              f"{rows[1]['sieve_s'] / rows[0]['sieve_s']:.1f}x, "
              f"kahan: {rows[1]['kahan_s'] / rows[0]['kahan_s']:.1f}x")
    print(f"tables identical (checksum {rows[0]['checksum']})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
