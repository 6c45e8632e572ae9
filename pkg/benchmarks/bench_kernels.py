"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--census-length 7]

The census row runs in a subprocess per backend because the backend (and the
rational type that goes with it) is fixed at import.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from ordpat import _kernels_py
from ordpat.perm import invert

try:
    from ordpat import _kernels
except ImportError:
    _kernels = None

CENSUS_SNIPPET = """
import time
from ordpat.plmaps import builtin_map, enumerate_allowed
t = time.perf_counter()
enumerate_allowed(builtin_map("sawtooth", 3), {L})
print(time.perf_counter() - t)
"""


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def census_time(L, pure):
    env = dict(os.environ)
    if pure:
        env["ORDPAT_PURE_PYTHON"] = "1"
    else:
        env.pop("ORDPAT_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", CENSUS_SNIPPET.format(L=L)],
                         env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--census-length", type=int, default=7)
    args = ap.parse_args(argv)
    if _kernels is None:
        sys.exit("compiled extension not built; reinstall without ORDPAT_NO_EXT")

    pinv = np.array(invert((2, 1, 0)), dtype=np.int64)
    series = np.random.default_rng(0).random(200_000)
    state = np.array([1, 2, 3, 4], dtype=np.uint64)
    buf = np.empty(1_000_000)
    cases = [
        ("count_outgrowths M=8", lambda k: k.count_outgrowths(8, pinv)),
        ("window_codes n=2e5 L=5", lambda k: k.window_codes(series, 5)),
        ("xoshiro_fill 1e6", lambda k: k.xoshiro_fill(state, buf)),
    ]
    print(f"{'kernel':<28}{'compiled s':>12}{'python s':>12}{'speedup':>10}")
    for name, fn in cases:
        fast = best_of(lambda: fn(_kernels), args.repeat)
        slow = best_of(lambda: fn(_kernels_py), 1)
        print(f"{name:<28}{fast:>12.4f}{slow:>12.4f}{slow / fast:>10.1f}")
    L = args.census_length
    fast, slow = census_time(L, False), census_time(L, True)
    print(f"{f'sawtooth3 census L={L}':<28}{fast:>12.4f}{slow:>12.4f}{slow / fast:>10.1f}")


if __name__ == "__main__":
    main()
