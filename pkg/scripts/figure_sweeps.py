#!/usr/bin/env python3
"""Entanglement of the |2,1> pair along the three SI sweeps (B, rho, np).

Writes one CSV per sweep and prints a coarse summary of each curve.
"""

import argparse
import logging
from pathlib import Path

from quasiphoton.cli import SWEEP_HEADER, _csv_text, sweep_grid, sweep_rows
from quasiphoton.params import DEFAULT_CONFIG, input_from_config

SWEEPS = {
    "magnetic_field": (0.0, 0.16, False),
    "electron_density": (1e19, 1e21, True),
    "np": (1e7, 1e8, True),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--points", type=int, default=50)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = input_from_config(DEFAULT_CONFIG)
    for param, (lo, hi, log) in SWEEPS.items():
        rows, skipped = sweep_rows(base, param, sweep_grid(lo, hi, args.points, log))
        path = out / f"sweep_{param}.csv"
        path.write_text(_csv_text(SWEEP_HEADER, rows), encoding="utf-8")
        E = [r[6] for r in rows]
        imin = min(range(len(E)), key=E.__getitem__)
        print(f"{param}: {len(rows)} points ({len(skipped)} guarded) -> {path}")
        print(f"  E first {E[0]:.4g}  min {E[imin]:.4g} at {rows[imin][1]:.4g}  last {E[-1]:.4g}")


if __name__ == "__main__":
    main()
