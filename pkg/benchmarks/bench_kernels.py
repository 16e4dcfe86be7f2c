"""Compare the numba and numpy kernels on Macaulay-sized matrices and rank batches.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from minrank import _kernels as K
from minrank.bounds import bound_report
from minrank.harness import minors_system
from minrank.gbengine import macaulay_matrix
from minrank.polymatrix import DegreeMatrix, random_instance


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed")
    K.warmup()

    p = 101
    inst = random_instance("generalized", 3, 3, 1, 4, DegreeMatrix.constant(3, 3, 2), p, True, 0)
    F, _ = minors_system(inst)
    bound = bound_report(inst).bound
    print(f"{'case':<40} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}")
    for D in range(6, bound + 1):
        mat, _ = macaulay_matrix(F, D)
        label = f"rref Macaulay D={D} ({mat.shape[0]}x{mat.shape[1]})"
        tn = best_of(lambda: K.rref_numba(mat.copy(), p), args.repeat)
        tp = best_of(lambda: K.rref_numpy(mat.copy(), p), args.repeat)
        print(f"{label:<40} {tn * 1e3:>10.2f} {tp * 1e3:>10.2f} {tp / tn:>7.1f}x")

    rng = np.random.default_rng(0)
    for count, shape in ((3125, (3, 4)), (100_000, (3, 3))):
        mats = rng.integers(0, 5, size=(count, *shape))
        label = f"batch rank {count} x {shape[0]}x{shape[1]} (p=5)"
        tn = best_of(lambda: K.batch_rank_numba(mats, 5), args.repeat)
        tp = best_of(lambda: K.batch_rank_numpy(mats, 5), args.repeat)
        print(f"{label:<40} {tn * 1e3:>10.2f} {tp * 1e3:>10.2f} {tp / tn:>7.1f}x")


if __name__ == "__main__":
    main()
