"""Compare the compiled and numpy kernels on classifier-sized workloads.

Usage: ``python benchmarks/bench_kernels.py [--repeat N]``
"""
import argparse
import timeit

import numpy as np

from extremaldep import _backend
from extremaldep.bootstrap import make_stream, resample_indices


def workloads(n=822):
    rng = np.random.default_rng(0)
    r = (1 - rng.random(n)) ** -1.0
    th = rng.random(n)
    idx = resample_indices(n, 50, 200, make_stream(0))
    desc = np.sort(r)[::-1].copy()
    return {
        # one cascade repetition: B=200 resamples of m=50, k_m=10
        "bootstrap_statistics B=200 m=50": lambda k: k.bootstrap_statistics(r, th, idx, 10, 0.3, 0.7),
        # threshold scan over k = 10..n/2
        "ks_scan n=822": lambda k: k.ks_scan(desc, 10, n // 2),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = _backend.available_backends()
    print(f"{'workload':36s}" + "".join(f"{name:>14s}" for name in backends) + "   speedup")
    for label, fn in workloads().items():
        times = {}
        for name, mod in backends.items():
            number = 20
            best = min(timeit.repeat(lambda: fn(mod), number=number, repeat=args.repeat)) / number
            times[name] = best
        row = f"{label:36s}" + "".join(f"{times[n] * 1e3:12.3f}ms" for n in backends)
        if "cython" in times:
            row += f"   {times['python'] / times['cython']:6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
