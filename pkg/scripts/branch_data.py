"""Dump p(Z) along the four branches through both curve points for one (mu, q).

    python scripts/branch_data.py --mu -4 -2 -1 --q 1 --out branches.npz
"""

import argparse

import numpy as np

from soliton_forge.classify import curve_points, p_bounds, trace_branch
from soliton_forge.hirota import Spectrum


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--mu", type=float, nargs=3, default=[-4.0, -2.0, -1.0])
    ap.add_argument("--q", type=float, default=1.0)
    ap.add_argument("--n-points", type=int, default=401)
    ap.add_argument("--out", default="branches.npz")
    args = ap.parse_args()

    sp = Spectrum(tuple(args.mu))
    b = p_bounds(sp, args.q)
    data = {"p_bounds": np.array([b.p_low, b.p_high]), "wraps": np.array(b.wraps)}
    for family, (X, Y) in curve_points(sp, args.q).items():
        data[f"{family}_xy"] = np.array([X, Y])
        for k, branch in enumerate(trace_branch(sp, args.q, args.n_points, family=family), start=1):
            data[f"{family}_{k}"] = np.array([[pt.Z, pt.p] for pt in branch])
    np.savez(args.out, **data)
    arc = "outside" if b.wraps else "inside"
    print(f"p bounds ({b.p_low:.12g}, {b.p_high:.12g}), admissible {arc}; wrote {args.out}")


if __name__ == "__main__":
    main()
