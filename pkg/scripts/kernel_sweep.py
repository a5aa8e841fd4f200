"""Discrete kernel dimension for random spectra, with and without mesh refinement.

    python scripts/kernel_sweep.py --n 3 --trials 20 --seed 0
"""

import argparse
import time

import numpy as np

from soliton_forge.hirota import build
from soliton_forge.linearize import kernel_dimension


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--grid-points", type=int, default=2001)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'mu':<40}{'dim':>5}{'refined':>9}{'gap':>10}{'angle':>10}{'sec':>7}")
    for _ in range(args.trials):
        mu = np.sort(-rng.uniform(0.2, 3.0, args.n))
        a = rng.uniform(0.2, 5.0, args.n) * rng.choice([-1.0, 1.0], args.n)
        rep = build(tuple(mu), tuple(a))
        t0 = time.perf_counter()
        r1 = kernel_dimension(rep)
        r2 = kernel_dimension(rep, r1.grid.refined())
        label = " ".join(f"{m:.3f}" for m in mu)
        print(f"{label:<40}{r1.discrete_kernel_dim:>5}{r2.discrete_kernel_dim:>9}"
              f"{r1.gap_ratio:>10.1e}{r1.max_subspace_angle:>10.1e}{time.perf_counter() - t0:>7.2f}")


if __name__ == "__main__":
    main()
