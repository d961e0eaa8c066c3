#!/usr/bin/env python3
"""Weight of the target eigenvector outside the two-photon subspace vs coupling.

Prints M(eps) for the free and magnetic Hamiltonians and the fitted
log-log slopes.
"""

import argparse

import numpy as np

from quasiphoton.fock_oracle import build_hk_magnetic, build_hph, two_photon_projection
from quasiphoton.params import ModelParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--omega", type=float, default=0.3)
    ap.add_argument("--free-cutoff", type=int, default=6)
    ap.add_argument("--magnetic-cutoff", type=int, default=4)
    args = ap.parse_args()

    eps = np.geomspace(1e-3, 1e-1, 5)
    cases = {
        "free": lambda e: build_hph(ModelParams(1, 2, e), args.free_cutoff),
        "magnetic": lambda e: build_hk_magnetic(ModelParams(1, 2, e, args.omega), args.magnetic_cutoff),
    }
    for name, build in cases.items():
        M = np.array([two_photon_projection(build(e)).remainder for e in eps])
        k = np.polyfit(np.log(eps), np.log(M), 1)[0]
        print(f"{name}: slope {k:.3f}")
        for e, m in zip(eps, M):
            print(f"  eps {e:.3g}  M {m:.4g}  M/eps {m / e:.4g}  M/sqrt(eps) {m / np.sqrt(e):.4g}")


if __name__ == "__main__":
    main()
