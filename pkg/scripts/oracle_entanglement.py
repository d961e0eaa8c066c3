#!/usr/bin/env python3
"""Analytic vs truncated-Fock entanglement of the |2,1> pair across omega.

At omega = 0 the two agree to truncation accuracy; for omega > 0 the
closed-form state omits the Landau-mediated components and the relative
gap grows with omega.
"""

import argparse

from quasiphoton.entangle import free_measures, magnetic_measures
from quasiphoton.fock_oracle import (build_hk_magnetic, build_hph, entanglement_oracle,
                                     two_photon_projection)
from quasiphoton.params import ModelParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--epsilon", type=float, default=0.05)
    ap.add_argument("--kappa2", type=float, default=2.0)
    ap.add_argument("--cutoff", type=int, default=4)
    ap.add_argument("--omegas", default="0,0.1,0.3,0.6")
    args = ap.parse_args()

    for w in (float(x) for x in args.omegas.split(",")):
        p = ModelParams(1.0, args.kappa2, args.epsilon, w)
        if w == 0:
            proj = two_photon_projection(build_hph(p, args.cutoff + 2))
            analytic = free_measures(p, 2, 1)
        else:
            proj = two_photon_projection(build_hk_magnetic(p, args.cutoff))
            analytic = magnetic_measures(p, 2, 1)
        oracle = entanglement_oracle(proj.amplitudes)
        rel = (analytic.E - oracle.E) / oracle.E
        print(f"omega {w:<5g} E_oracle {oracle.E:.6g}  E_analytic {analytic.E:.6g}  "
              f"rel {rel:+.3%}  y_oracle {oracle.y:.10f}  M {proj.remainder:.3g}")


if __name__ == "__main__":
    main()
