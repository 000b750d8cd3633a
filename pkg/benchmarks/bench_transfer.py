"""Time the transfer-matrix kernel on each available backend.

Usage: python3 benchmarks/bench_transfer.py [--max-sites 10] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from yangbaxter import fixtures, kernels
from yangbaxter.rmatrix import VertexWeights


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-sites", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    w = np.ascontiguousarray(VertexWeights(fixtures.tl_rational_operator(2)).tensor(0.3))
    backends = sorted(kernels.BACKENDS)
    print(f"default backend: {kernels.BACKEND}")
    print(f"{'N':>3} {'dim':>6} " + " ".join(f"{b + ' [ms]':>14}" for b in backends) + f" {'max |diff|':>12}")
    for n in range(2, args.max_sites + 1):
        times, results = [], []
        for b in backends:
            results.append(kernels.transfer_matrix(w, n, b))
            t = min(timeit.repeat(lambda: kernels.transfer_matrix(w, n, b), number=1, repeat=args.repeat))
            times.append(1e3 * t)
        diff = max(np.abs(r - results[0]).max() for r in results)
        print(f"{n:>3} {2 ** n:>6} " + " ".join(f"{t:>14.3f}" for t in times) + f" {diff:>12.2e}")


if __name__ == "__main__":
    main()
