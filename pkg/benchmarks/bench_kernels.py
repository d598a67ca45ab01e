"""Time the compiled and the numpy kernels on the same inputs.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--number 200]

Prints one row per kernel and problem size with the best-of-``repeat`` time
per call for each backend and the speedup of the compiled one.
"""
import argparse
import timeit

import numpy as np

from minbasis import DegreeProfile, _kernels, random_matrix
from minbasis.sylvester import row_table, trimmed_shape

CASES = [
    ("4,3:0,1,1,2", 3),
    ("3,2:1,2,4", 6),
    ("6,6:1,2,3,3,4,5", 8),
]


def _fill_call(mod, M, k):
    table = row_table(M.degrees, k)
    out = np.zeros(trimmed_shape(M.profile, k), dtype=M.stack.dtype)
    return lambda: mod.fill_trimmed(out, M.stack, M.row_start, M.degrees, table, k, M.width)


def _horner_call(mod, M, k):
    lam = 0.3 + 0.7j
    return lambda: mod.horner(M.stack, M.row_start, M.degrees, lam)


def _bareiss_call(mod, M, k):
    rng = np.random.default_rng(k)
    rows = rng.integers(-5, 6, size=(4 * k, 4 * k + 2)).tolist()
    return lambda: mod.bareiss_rank([list(r) for r in rows])


KERNELS = {"fill_trimmed": _fill_call, "horner": _horner_call, "bareiss_rank": _bareiss_call}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--number", type=int, default=200)
    args = parser.parse_args(argv)

    backends = _kernels.backends()
    if "cython" not in backends:
        print("compiled extension not built; only the numpy fallback is available")
    names = sorted(backends)
    header = f"{'kernel':<14}{'profile':<18}{'k':>3}" + "".join(f"{n + ' us':>14}" for n in names)
    print(header + (f"{'speedup':>10}" if len(names) > 1 else ""))
    for kernel, make in KERNELS.items():
        for label, k in CASES:
            M = random_matrix(DegreeProfile.parse(label), 0)
            times = {}
            for name in names:
                fn = make(backends[name], M, k)
                best = min(timeit.repeat(fn, repeat=args.repeat, number=args.number))
                times[name] = 1e6 * best / args.number
            row = f"{kernel:<14}{label:<18}{k:>3}" + "".join(f"{times[n]:>14.2f}" for n in names)
            if len(names) > 1:
                row += f"{times['python'] / times['cython']:>9.1f}x"
            print(row)


if __name__ == "__main__":
    main()
