#!/usr/bin/env python3
"""Compare the empirical variance of the torus permanent estimators.

Runs the z^n, exp and geometric integrands on the same seeded matrix and
prints one row per choice, so the f-dependence of the variance is visible
at a glance.

Usage: python scripts/variance_scan.py [m] [samples] [seed]
"""

import sys

from permkit import rng
from permkit.combinatorics import RepetitionPattern
from permkit.estimators import estimator_variance_scan
from permkit.permanents import permanent_naive


def main() -> None:
    m = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    samples = int(sys.argv[2]) if len(sys.argv) > 2 else 200_000
    seed = int(sys.argv[3]) if len(sys.argv) > 3 else 7

    a = rng.unit_disk_matrix(m, seed)
    pattern = RepetitionPattern.uniform(m)
    truth = permanent_naive(a).value
    print(f"m={m}, samples={samples}, seed={seed}")
    print(f"exact permanent: {truth:.10f}")
    print(f"{'f':>6} {'estimate':>28} {'stderr':>12} {'variance':>12}")
    for row in estimator_variance_scan(a, pattern, ("pown", "exp", "geom"), samples, seed):
        est = complex(row["estimate_re"], row["estimate_im"])
        print(f"{row['f']:>6} {est:>28.10f} {row['stderr']:>12.3e} {row['variance']:>12.3e}")


if __name__ == "__main__":
    main()
