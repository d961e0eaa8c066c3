"""Command-line front end: compute, sweep, roots, oracle."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from dataclasses import replace

import numpy as np

from . import entangle, spectrum
from .params import (ConfigError, DEFAULT_CONFIG, ModelParams, PhysicalInput, from_physical,
                     input_from_config, load_config, validate)

log = logging.getLogger("quasiphoton")

EXIT_OK = 0
EXIT_BUDGET = 1
EXIT_USAGE = 2
EXIT_ALL_GUARDED = 3

SWEEP_PARAMS = ("magnetic_field", "electron_density", "np", "wavelength_2")
SWEEP_HEADER = ("param", "value", "magnetic_field_T", "omega", "epsilon", "y", "E", "E_S",
                "Phi_omega", "E_S_asym", "smallness_ratio", "smallness_flag",
                "resonance_proximity", "resonance_flag")
ORACLE_HEADER = ("check", "cutoff", "level", "predicted", "observed", "deviation")
POL_PAIRS = ((1, 1), (1, 2), (2, 1), (2, 2))


def fmt(x) -> str:
    """Round-trip-safe 17 significant digits; ints and flags verbatim."""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) for x in r])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _physical(args) -> PhysicalInput:
    return load_config(args.config) if args.config else input_from_config(DEFAULT_CONFIG)


# -- compute --------------------------------------------------------------------

def compute_report(inp: PhysicalInput, guard_band: float = 0.05) -> str:
    p = from_physical(inp)
    diag = validate(p, guard_band=guard_band)
    lines = [
        f"kappa_1 = {p.kappa_1:.10g} 1/m    kappa_2 = {p.kappa_2:.10g} 1/m",
        f"epsilon = {p.epsilon:.10g} 1/m^2  omega = {p.omega:.10g} 1/m",
        f"smallness ratio {diag.smallness_ratio:.4g}{'  [FLAG]' if diag.smallness_flag else ''}",
        f"resonance proximity {diag.resonance_proximity:.4g}"
        f"{'  [FLAG]' if diag.resonance_flag else ''}",
    ]
    if p.epsilon == 0:
        lines.append("epsilon = 0: identity transformation, no entanglement")
    fr = spectrum.free_roots_closed(p)
    lines.append(f"free roots tau_1 = {fr.tau_1:.15g}, tau_2 = {fr.tau_2:.15g}, H0 = {fr.H0:.6g}")
    lines.append("free entanglement (lam1, lam2): E, E_S")
    for pair in POL_PAIRS:
        r = entangle.free_measures(p, *pair)
        lines.append(f"  {pair}: {r.E:.10g}, {r.E_S:.10g}")
    fa = entangle.free_asymptotics(p)
    r21 = entangle.free_measures(p, 2, 1)
    lines.append(f"  asymptotic E_S = eps^4 Phi_0 = {fa.E_S_asym:.6g} (ratio {_ratio(r21.E_S, fa.E_S_asym)})")
    lines.append(f"  asymptotic E = {fa.E_asym:.6g} (ratio {_ratio(r21.E, fa.E_asym)})")
    try:
        mr = spectrum.magnetic_roots(p, guard_band=guard_band)
    except spectrum.ResonanceError as exc:
        lines.append(f"magnetic pipeline skipped: {exc}")
        return "\n".join(lines) + "\n"
    lines.append("magnetic roots: " + ", ".join(
        f"tau{k}{lam} = {mr.tau[(k, lam)]:.15g}" for k, lam in spectrum.PHOTON_KEYS)
        + f", tau_0 = {mr.tau_0:.15g}")
    lines.append("magnetic entanglement (lam1, lam2): E, E_S")
    for pair in POL_PAIRS:
        r = entangle.magnetic_measures(p, *pair, roots=mr, guard_band=guard_band)
        lines.append(f"  {pair}: {r.E:.10g}, {r.E_S:.10g}")
    pw = entangle.phi_omega(p)
    m21 = entangle.magnetic_measures(p, 2, 1, roots=mr, guard_band=guard_band)
    lines.append(f"  asymptotic E_S = eps^4 Phi_omega = {pw.E_S_asym:.6g} (ratio {_ratio(m21.E_S, pw.E_S_asym)})")
    lines.append(f"  asymptotic E = {pw.E_asym:.6g} (ratio {_ratio(m21.E, pw.E_asym)})")
    return "\n".join(lines) + "\n"


def _ratio(a: float, b: float) -> str:
    return f"{a / b:.6g}" if b else "n/a"


def cmd_compute(args) -> int:
    sys.stdout.write(compute_report(_physical(args), args.guard_band))
    return EXIT_OK


# -- sweep ----------------------------------------------------------------------

def sweep_grid(lo: float, hi: float, points: int, log_spacing: bool) -> np.ndarray:
    if not lo < hi:
        raise ValueError("--min must be below --max")
    if points < 2:
        raise ValueError("--points must be at least 2")
    if log_spacing:
        if lo <= 0:
            raise ValueError("log spacing needs a positive --min")
        return np.geomspace(lo, hi, points)
    return np.linspace(lo, hi, points)


def _with_value(inp: PhysicalInput, param: str, value: float) -> PhysicalInput:
    if param == "magnetic_field":
        return replace(inp, magnetic_field=value)
    if param == "electron_density":
        return replace(inp, electron_density=value)
    if param == "np":
        return replace(inp, np=value)
    if param == "wavelength_2":
        return replace(inp, wavelength_2=value * 1e-9)
    raise ValueError(f"unknown sweep parameter {param!r}")


def sweep_rows(inp: PhysicalInput, param: str, values, guard_band: float = 0.05):
    """Rows for non-guarded points plus a list of (value, reason) skips."""
    rows, skipped = [], []
    for val in values:
        try:
            point = _with_value(inp, param, float(val))
            p = from_physical(point)
        except ValueError as exc:
            skipped.append((val, str(exc)))
            continue
        diag = validate(p, guard_band=guard_band)
        if diag.resonance_flag:
            skipped.append((val, f"resonance guard (proximity {diag.resonance_proximity:.3g})"))
            continue
        rep = entangle.magnetic_measures(p, 2, 1, guard_band=guard_band)
        try:
            pw = entangle.phi_omega(p)
        except spectrum.ResonanceError:
            pw = None
        rows.append((param, float(val), point.magnetic_field, p.omega, p.epsilon, rep.y, rep.E,
                     rep.E_S, pw.Phi_omega if pw else math.nan, pw.E_S_asym if pw else math.nan,
                     diag.smallness_ratio, diag.smallness_flag, diag.resonance_proximity,
                     diag.resonance_flag))
    return rows, skipped


def cmd_sweep(args) -> int:
    if args.sweep_param is None or args.min is None or args.max is None:
        log.error("sweep needs --sweep-param, --min and --max")
        return EXIT_USAGE
    grid = sweep_grid(args.min, args.max, args.points, args.log)
    rows, skipped = sweep_rows(_physical(args), args.sweep_param, grid, args.guard_band)
    for val, reason in skipped:
        log.warning("skipped %s = %s: %s", args.sweep_param, fmt(val), reason)
    if not rows:
        log.error("every grid point was guarded; no output")
        return EXIT_ALL_GUARDED
    _emit(_csv_text(SWEEP_HEADER, rows), args.out)
    return EXIT_OK


# -- roots ----------------------------------------------------------------------

def cmd_roots(args) -> int:
    p = _params_from_args(args)
    out = []
    for name, fn in (("closed", spectrum.free_roots_closed), ("numeric", spectrum.free_roots_numeric),
                     ("asymptotic", spectrum.free_roots_asymptotic)):
        if name == "numeric" and p.epsilon == 0:
            continue
        r = fn(p)
        res = r.residuals()
        for s in (1, 2):
            out.append(("free", name, s, 0, r.tau[s - 1], res[s - 1]))
    try:
        mr = spectrum.magnetic_roots(p, guard_band=args.guard_band)
    except spectrum.ResonanceError as exc:
        log.warning("magnetic roots skipped: %s", exc)
    else:
        for (k, lam), t in sorted(mr.tau.items()):
            if (k, lam) == (0, 2):
                continue
            out.append(("magnetic", "numeric", k, lam, t, mr.branch_residuals.get((k, lam), 0.0)))
        ma = spectrum.magnetic_roots_asymptotic(p)
        for (k, lam), t in sorted(ma.tau.items()):
            out.append(("magnetic", "asymptotic", k, lam, t, math.nan))
    _emit(_csv_text(("case", "method", "k", "lam", "tau", "residual"), out), args.out)
    return EXIT_OK


# -- oracle ---------------------------------------------------------------------

def _params_from_args(args) -> ModelParams:
    """SI config rescaled by kappa_1, or scaled defaults kappa = (1, 2)."""
    if args.config:
        p = from_physical(load_config(args.config)).rescaled()
    else:
        magnetic = getattr(args, "case", "free") == "magnetic"
        eps = args.epsilon if args.epsilon is not None else (0.05 if magnetic else 0.1)
        omega = args.omega if args.omega is not None else (0.3 if magnetic else 0.0)
        p = ModelParams(1.0, args.kappa2, eps, omega)
    if args.epsilon is not None and args.config:
        p = replace(p, epsilon=args.epsilon)
    return p


def cmd_oracle(args) -> int:
    from .fock_oracle import DimensionError, run_oracle

    magnetic = args.case == "magnetic"
    p = _params_from_args(args)
    if not magnetic:
        p = replace(p, omega=0.0)
    cutoffs = args.cutoffs or ((3, 4, 5) if magnetic else (4, 6, 8))
    try:
        run = run_oracle(p, cutoffs, magnetic=magnetic, n_levels=args.levels)
    except DimensionError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    rows = [(r.check, r.cutoff, r.level, r.predicted, r.observed, r.deviation) for r in run.rows]
    _emit(_csv_text(ORACLE_HEADER, rows), args.out)
    for m in run.messages:
        log.info("%s", m)
    if not run.ok:
        log.error("analytic-vs-oracle budget violated")
        return EXIT_BUDGET
    return EXIT_OK


# -- entry point ----------------------------------------------------------------

def _cutoffs(text: str) -> tuple[int, ...]:
    vals = tuple(int(x) for x in text.split(",") if x.strip())
    if not vals or any(b <= a for a, b in zip(vals, vals[1:])):
        raise argparse.ArgumentTypeError("cutoffs must be a non-empty increasing list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quasiphoton", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value configuration file")
        p.add_argument("--guard-band", type=float, default=0.05)
        p.add_argument("--out", help="CSV output path (default stdout)")

    c = sub.add_parser("compute", help="single-point report")
    common(c)
    c.set_defaults(func=cmd_compute)

    s = sub.add_parser("sweep", help="parameter sweep as CSV")
    common(s)
    s.add_argument("--sweep-param", choices=SWEEP_PARAMS)
    s.add_argument("--min", type=float)
    s.add_argument("--max", type=float)
    s.add_argument("--points", type=int, default=50)
    s.add_argument("--log", action="store_true", help="geometric spacing")
    s.set_defaults(func=cmd_sweep)

    for name, func, hlp in (("roots", cmd_roots, "characteristic-equation roots"),
                            ("oracle", cmd_oracle, "truncated-Fock verification")):
        r = sub.add_parser(name, help=hlp)
        common(r)
        r.add_argument("--case", choices=("free", "magnetic"), default="free")
        r.add_argument("--epsilon", type=float, help="scaled coupling (kappa_1 = 1 units)")
        r.add_argument("--omega", type=float, help="scaled cyclotron parameter")
        r.add_argument("--kappa2", type=float, default=2.0, help="scaled kappa_2")
        r.set_defaults(func=func)
        if name == "oracle":
            r.add_argument("--cutoffs", type=_cutoffs)
            r.add_argument("--levels", type=int, default=6)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("config: %s", exc)
        return EXIT_USAGE
    except (ValueError, spectrum.SolverError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
