"""Quasi-photon frequencies: characteristic-equation roots and energies.

Free case: tau_s are the positive roots of

    epsilon * sum_l 1 / (tau^2 - kappa_l^2) = 1

on the branches tau_s(epsilon=0) = kappa_s.  Magnetic case, for each
polarization label lam:

    sum_s epsilon / (tau^2 - kappa_s^2) = 1 + (-1)**(lam-1) * omega / tau

Roots are stored as ``anchor + offset`` with the anchor a pole kappa_s
(or 0), so that tau^2 - kappa_s^2 = offset * (tau + kappa_s) carries full
relative precision even when epsilon is tiny.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .params import ModelParams, resonance_proximity

RTOL_X = 1e-14
_EPS = np.finfo(float).eps


class SolverError(RuntimeError):
    pass


class ResonanceError(ValueError):
    """omega lies inside the resonance guard band around some kappa_s."""


# -- free case ---------------------------------------------------------------

@dataclass(frozen=True)
class FreeRoots:
    """Free quasi-photon frequencies.

    ``shift[s]`` is tau_s**2 - kappa_s**2, kept separately because it is
    the quantity every downstream formula divides by.
    """

    tau: tuple[float, float]
    shift: tuple[float, float]
    kappa: tuple[float, float]
    epsilon: float
    A: float
    B_disc: float
    method: str = "closed"

    @property
    def tau_1(self) -> float:
        return self.tau[0]

    @property
    def tau_2(self) -> float:
        return self.tau[1]

    @property
    def H0(self) -> float:
        # tau - kappa = shift / (tau + kappa) avoids cancellation
        return sum(d / (t + k) for t, d, k in zip(self.tau, self.shift, self.kappa))

    def gap(self, root: int, s: int) -> float:
        """tau_root**2 - kappa_s**2 for 1-based indices."""
        if root == s:
            return self.shift[root - 1]
        return self.kappa[root - 1] ** 2 - self.kappa[s - 1] ** 2 + self.shift[root - 1]

    def residuals(self) -> tuple[float, float]:
        """Relative residual of the characteristic equation at each root."""
        out = []
        for r in (1, 2):
            if self.epsilon == 0:
                out.append(0.0)
                continue
            terms = [self.epsilon / self.gap(r, s) for s in (1, 2)]
            out.append(abs(sum(terms) - 1.0) / (1.0 + sum(abs(t) for t in terms)))
        return tuple(out)


def _disc(k1: float, k2: float, eps: float) -> tuple[float, float, float]:
    half = (k1**2 - k2**2) / 2.0
    sgn = 1.0 if k1 - k2 >= 0 else -1.0
    root = math.hypot(eps, half)
    A = eps + (k1**2 + k2**2) / 2.0
    return A, sgn * root, half


def free_roots_closed(params: ModelParams) -> FreeRoots:
    """tau_1^2 = A + B, tau_2^2 = A - B, evaluated in cancellation-free form."""
    k1, k2, eps = params.kappa_1, params.kappa_2, params.epsilon
    A, B, half = _disc(k1, k2, eps)
    # tau_s^2 - kappa_s^2 = eps +/- (sqrt(eps^2 + half^2) - |half|)
    root = abs(B)
    small = eps**2 / (abs(half) + root)
    # the branch starting at the larger kappa is pushed up by `small`
    if k1 > k2:
        shifts = (eps + small, eps - small)
    else:
        shifts = (eps - small, eps + small)
    taus = tuple(math.sqrt(k**2 + d) for k, d in zip((k1, k2), shifts))
    return FreeRoots(taus, shifts, (k1, k2), eps, A, B, "closed")


def _inner(fn, edge: float, width: float, direction: int, want_positive: bool,
           grow: bool = False, max_iter: int = 2000) -> float:
    """Step from ``edge`` in ``direction`` until sign(fn) matches.

    Shrinks the step geometrically toward an edge pole, or (grow=True)
    expands it outward toward infinity.
    """
    step = width
    for _ in range(max_iter):
        x = edge + direction * step
        val = fn(x)
        if np.isfinite(val) and (val > 0) == want_positive and val != 0:
            return x
        step = step * 2.0 if grow else step / 2.0
        if step == 0 or not np.isfinite(step):
            break
    raise SolverError("could not bracket root")


def _brent(fn, a: float, b: float, maxiter: int = 500) -> float:
    lo, hi = min(a, b), max(a, b)
    try:
        return brentq(fn, lo, hi, xtol=1e-300, rtol=max(RTOL_X, 4 * _EPS), maxiter=maxiter)
    except (RuntimeError, ValueError) as exc:
        raise SolverError(str(exc)) from exc


def free_roots_numeric(params: ModelParams, maxiter: int = 500) -> FreeRoots:
    """Bracketing solve of the free characteristic equation in x = tau^2.

    Unknowns are the shifts x - kappa_s^2.  The function of x is monotone
    on (kappa_min^2, kappa_max^2) and on (kappa_max^2, inf), one root each.
    """
    k1, k2, eps = params.kappa_1, params.kappa_2, params.epsilon
    A, B, _ = _disc(k1, k2, eps)
    if eps == 0:
        return FreeRoots((k1, k2), (0.0, 0.0), (k1, k2), 0.0, A, B, "numeric")
    kmin, kmax = sorted((k1, k2))
    gap = kmax**2 - kmin**2

    def upper(d):  # x = kmax^2 + d
        return eps / d + eps / (d + gap) - 1.0

    def lower(d):  # x = kmin^2 + d, d in (0, gap)
        return eps / d + eps / (d - gap) - 1.0

    hi = _inner(upper, 0.0, eps, +1, want_positive=False, grow=True)
    lo = _inner(upper, 0.0, hi, +1, want_positive=True)
    d_up = _brent(upper, lo, hi, maxiter)

    lo = _inner(lower, 0.0, min(eps, gap / 2), +1, want_positive=True)
    hi = _inner(lower, gap, gap / 2, -1, want_positive=False)
    d_low = _brent(lower, lo, hi, maxiter)

    if k1 > k2:
        shifts = (d_up, d_low)
    else:
        shifts = (d_low, d_up)
    taus = tuple(math.sqrt(k**2 + d) for k, d in zip((k1, k2), shifts))
    return FreeRoots(taus, shifts, (k1, k2), eps, A, B, "numeric")


def free_roots_asymptotic(params: ModelParams) -> FreeRoots:
    """Second-order small-epsilon expansion of the free roots.

    tau_s = kappa_s + eps/(2 kappa_s)
            + (2 kappa_s^2 + kappa_1^2 + kappa_2^2) / (8 kappa_s^3)
              * eps^2 / (kappa_s^2 - kappa_l^2)
    """
    k = (params.kappa_1, params.kappa_2)
    eps = params.epsilon
    taus = []
    for s in range(2):
        ks, kl = k[s], k[1 - s]
        coef = (2 * ks**2 + k[0] ** 2 + k[1] ** 2) / (8 * ks**3)
        taus.append(ks + eps / (2 * ks) + coef * eps**2 / (ks**2 - kl**2))
    shifts = tuple((t - kk) * (t + kk) for t, kk in zip(taus, k))
    A, B, _ = _disc(k[0], k[1], eps)
    return FreeRoots(tuple(taus), shifts, k, eps, A, B, "asymptotic")


# -- magnetic case -----------------------------------------------------------

Key = tuple[int, int]
PHOTON_KEYS: tuple[Key, ...] = ((1, 1), (1, 2), (2, 1), (2, 2))


@dataclass(frozen=True)
class MagneticRoots:
    """Magnetic quasi-photon frequencies keyed by (k, lam).

    ``tau[(0, 1)]`` is the Landau-mode frequency tau_0 and ``tau[(0, 2)]``
    is 0 by the convention tau_{0,lam} = tau_0 delta_{lam,1}.  tau_0 is the
    root continuous with omega at epsilon -> 0; it solves the lam = 2 sign
    variant of the equation (``landau_equation``).  At omega = 0 the Landau
    mode decouples with zero frequency and tau_0 = 0.
    """

    tau: dict[Key, float]
    anchor: dict[Key, float]
    offset: dict[Key, float]
    kappa: tuple[float, float]
    epsilon: float
    omega: float
    branch_residuals: dict[Key, float] = field(default_factory=dict)
    landau_equation: int = 2
    method: str = "numeric"

    @property
    def tau_0(self) -> float:
        return self.tau[(0, 1)]

    def gap(self, key: Key, s: int) -> float:
        """tau_key**2 - kappa_s**2 with the pole difference taken exactly."""
        t = self.tau[key]
        ks = self.kappa[s - 1]
        if self.anchor.get(key) == ks:
            return self.offset[key] * (t + ks)
        return (t - ks) * (t + ks)

    def photon_taus(self) -> dict[Key, float]:
        return {k: self.tau[k] for k in PHOTON_KEYS}


def _magnetic_eq(params: ModelParams, lam: int):
    """h(anchor, t) for tau = anchor + t; h > 0 at the left end of each interval."""
    k = params.kappa
    eps, omega = params.epsilon, params.omega
    sign = 1.0 if lam == 1 else -1.0

    def h(anchor: float, t: float) -> float:
        tau = anchor + t
        S = 0.0
        for ks in k:
            diff = t if anchor == ks else tau - ks
            S += eps / (diff * (tau + ks))
        return S - 1.0 - sign * omega / tau

    return h


def magnetic_residual(params: ModelParams, lam: int, anchor: float, t: float) -> float:
    tau = anchor + t
    terms = []
    for ks in params.kappa:
        diff = t if anchor == ks else tau - ks
        terms.append(params.epsilon / (diff * (tau + ks)))
    rhs = params.omega / tau
    lhs = sum(terms) - 1.0 - (rhs if lam == 1 else -rhs)
    return abs(lhs) / (1.0 + rhs + sum(abs(x) for x in terms))


def _solve_interval(params: ModelParams, lam: int, L: float, R: float,
                    target: float, maxiter: int) -> tuple[float, float]:
    """Single root of the lam-equation on (L, R); returns (anchor, offset).

    The equation is positive near L and negative near R (or at infinity).
    """
    h = _magnetic_eq(params, lam)
    kset = params.kappa
    if target in kset and target == L:
        anchor = L
    elif target in kset and target == R:
        anchor = R
    else:
        anchor = 0.0

    def g(t):
        return h(anchor, t)

    width = (R - L) / 2 if math.isfinite(R) else max(params.epsilon / max(kset), 1e-3 * max(kset))
    lo = _inner(g, L - anchor, width, +1, want_positive=True)
    if math.isfinite(R):
        hi = _inner(g, R - anchor, (R - L) / 2, -1, want_positive=False)
    else:
        hi = _inner(g, L - anchor, width, +1, want_positive=False, grow=True)
    # roots many decades below the bracket (tiny omega): bisect in log space first
    while 0 < lo < hi and hi > 4 * lo:
        mid = math.sqrt(lo) * math.sqrt(hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    t = _brent(g, lo, hi, maxiter)
    return anchor, t


def magnetic_roots(params: ModelParams, guard_band: float | None = 0.05,
                   maxiter: int = 500) -> MagneticRoots:
    """All five positive roots of the magnetic characteristic equation.

    Each lam = 1 root lies alone in (kappa_min, kappa_max) or (kappa_max, inf);
    the lam = 2 equation is strictly decreasing between its poles at 0,
    kappa_min, kappa_max and has one root in each of the three intervals.
    Branches follow by continuity in epsilon: the sorted lam = 2 roots map
    onto sorted(kappa_min, kappa_max, omega).
    """
    eps, omega = params.epsilon, params.omega
    if guard_band is not None and omega > 0:
        prox = resonance_proximity(params)
        if prox < guard_band:
            raise ResonanceError(
                f"omega={omega:.6g} within guard band {guard_band} of a photon wavenumber "
                f"(proximity {prox:.3g})")
    k1, k2 = params.kappa
    kmin, kmax = sorted((k1, k2))
    branch_of = {kmin: 1 if k1 == kmin else 2, kmax: 1 if k1 == kmax else 2}

    tau: dict[Key, float] = {}
    anchor: dict[Key, float] = {}
    offset: dict[Key, float] = {}
    resid: dict[Key, float] = {}

    def put(key, lam, a, t):
        tau[key] = a + t
        anchor[key] = a
        offset[key] = t
        resid[key] = magnetic_residual(params, lam, a, t) if eps > 0 else 0.0

    if eps == 0:
        for kk in (1, 2):
            for lam in (1, 2):
                put((kk, lam), lam, params.kappa[kk - 1], 0.0)
        tau[(0, 1)], anchor[(0, 1)], offset[(0, 1)], resid[(0, 1)] = omega, 0.0, omega, 0.0
        tau[(0, 2)] = 0.0
        return MagneticRoots(tau, anchor, offset, params.kappa, eps, omega, resid)

    try:
        for L, R, target in ((kmin, kmax, kmin), (kmax, math.inf, kmax)):
            a, t = _solve_interval(params, 1, L, R, target, maxiter)
            put((branch_of[target], 1), 1, a, t)
    except SolverError as exc:
        raise SolverError(f"lam=1 branch failed near resonance: {exc}") from exc

    if omega == 0:
        for kk in (1, 2):
            put((kk, 2), 2, anchor[(kk, 1)], offset[(kk, 1)])
        # decoupled zero-frequency Landau mode
        tau[(0, 1)], anchor[(0, 1)], offset[(0, 1)], resid[(0, 1)] = 0.0, 0.0, 0.0, 0.0
    else:
        targets = sorted([(kmin, "k"), (kmax, "k"), (omega, "w")], key=lambda p: p[0])
        intervals = ((0.0, kmin), (kmin, kmax), (kmax, math.inf))
        for (L, R), (target, kind) in zip(intervals, targets):
            try:
                a, t = _solve_interval(params, 2, L, R, target if kind == "k" else -1.0, maxiter)
            except SolverError as exc:
                which = "Landau" if kind == "w" else f"k={branch_of[target]}"
                raise SolverError(f"lam=2 {which} branch failed near resonance: {exc}") from exc
            key = (0, 1) if kind == "w" else (branch_of[target], 2)
            put(key, 2, a, t)
    tau[(0, 2)] = 0.0
    return MagneticRoots(tau, anchor, offset, params.kappa, eps, omega, resid)


def magnetic_roots_asymptotic(params: ModelParams) -> MagneticRoots:
    """tau_{k,lam} = kappa_k + (eps/2) / (kappa_k + (-1)**(lam-1) omega).

    No expansion for tau_0 is available at this order; it is omitted.
    """
    tau: dict[Key, float] = {}
    anchor: dict[Key, float] = {}
    offset: dict[Key, float] = {}
    for kk in (1, 2):
        kap = params.kappa[kk - 1]
        for lam in (1, 2):
            sgn = 1.0 if lam == 1 else -1.0
            t = (params.epsilon / 2) / (kap + sgn * params.omega)
            tau[(kk, lam)] = kap + t
            anchor[(kk, lam)] = kap
            offset[(kk, lam)] = t
    return MagneticRoots(tau, anchor, offset, params.kappa, params.epsilon,
                         params.omega, method="asymptotic")


# -- energies ----------------------------------------------------------------

@dataclass(frozen=True)
class OccupationNumbers:
    N: dict[Key, int] = field(default_factory=dict)
    N0: int = 0

    def __post_init__(self):
        for key, n in self.N.items():
            if key not in PHOTON_KEYS:
                raise ValueError(f"bad occupation key {key}")
            if n < 0:
                raise ValueError("occupation numbers must be non-negative")
        if self.N0 < 0:
            raise ValueError("occupation numbers must be non-negative")

    def get(self, key: Key) -> int:
        return self.N.get(key, 0)


@dataclass(frozen=True)
class QuasiphotonEnergy:
    E_ph: float
    H0: float
    E_K: float | None = None
    p0_squared: float | None = None


def magnetic_H0(roots: MagneticRoots) -> float:
    """Vacuum constant of the magnetic photon Hamiltonian.

    Fixed so that E_K(vacuum) = H0 + (m^2/np + omega)/2 equals the exact
    zero-point energy of the quadratic form, 1/2 sum(all five tau)
    - (kappa_1 + kappa_2) + m^2/(2 np).
    """
    # each kappa_k appears once per polarization, so subtract it pairwise
    half = 0.0
    for key in PHOTON_KEYS:
        kap = roots.kappa[key[0] - 1]
        if roots.anchor.get(key) == kap:
            half += roots.offset[key]
        else:
            half += roots.tau[key] - kap
    return 0.5 * half + 0.5 * (roots.tau_0 - roots.omega)


def quasiphoton_energy(roots: FreeRoots | MagneticRoots, occupations: OccupationNumbers,
                       magnetic: bool = False, np_: float | None = None,
                       mass: float = 0.0, p3: float = 0.0) -> QuasiphotonEnergy:
    """E_ph = sum tau N + H0; the magnetic case adds E_K and p0^2.

    For the magnetic extras ``np_`` (light-cone momentum, same length unit
    as the roots) is required; ``mass`` is m in inverse length.
    """
    if magnetic:
        if not isinstance(roots, MagneticRoots):
            raise TypeError("magnetic energies need MagneticRoots")
        H0 = magnetic_H0(roots)
        E_ph = sum(roots.tau[key] * occupations.get(key) for key in PHOTON_KEYS) + H0
        if np_ is None:
            return QuasiphotonEnergy(E_ph, H0)
        E_K = E_ph + roots.tau_0 * occupations.N0 + (mass**2 / np_ + roots.omega) / 2
        # eB = omega * np ; eB * 2 (tau_0/omega) N0 -> 2 np tau_0 N0
        p0_sq = roots.omega * np_ + 2 * np_ * roots.tau_0 * occupations.N0 + p3**2 + mass**2
        return QuasiphotonEnergy(E_ph, H0, E_K, p0_sq)
    if isinstance(roots, MagneticRoots):
        raise TypeError("free energies need FreeRoots; pass magnetic=True for MagneticRoots")
    if occupations.N0:
        raise ValueError("Landau occupation N0 only exists in the magnetic case")
    E_ph = sum(roots.tau[key[0] - 1] * occupations.get(key) for key in PHOTON_KEYS) + roots.H0
    return QuasiphotonEnergy(E_ph, roots.H0)
