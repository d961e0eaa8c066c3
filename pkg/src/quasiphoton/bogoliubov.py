"""Bogoliubov coefficient matrices a = u c - v c^dagger.

Rows and columns of the 4x4 blocks are indexed by ``mode_index(s, lam)``
= 2(s-1) + (lam-1): row (s, lam) is the free photon, column (k, lam') the
quasi-photon.  Entries use the cancellation-free forms

    (sqrt(t/k) + sqrt(k/t)) / (2 (t^2 - k^2)) = (t + k) / (2 sqrt(t k) (t^2 - k^2))
    (sqrt(t/k) - sqrt(k/t)) / (2 (t^2 - k^2)) = 1 / (2 sqrt(t k) (t + k))
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import ModelParams
from .spectrum import FreeRoots, MagneticRoots, free_roots_closed, magnetic_roots


def mode_index(s: int, lam: int) -> int:
    return 2 * (s - 1) + (lam - 1)


class RadicandError(ArithmeticError):
    """Negative radicand in a magnetic normalization (near resonance)."""


@dataclass(frozen=True)
class CanonicalResiduals:
    unitarity: float  # max |u u^dag - v v^dag - I|
    symmetry: float   # max |v u^T - u v^T|

    def ok(self, tol: float = 1e-10) -> bool:
        return self.unitarity < tol and self.symmetry < tol


@dataclass(frozen=True)
class CoeffMatrices:
    """u, v over the populated photon block.

    For the magnetic case ``landau_u`` / ``landau_v`` hold the column coupling
    to the Landau quasi-mode, which has no closed form; they are NaN sentinels.
    """

    u: np.ndarray
    v: np.ndarray
    case: str
    landau_u: np.ndarray | None = None
    landau_v: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "canonical_residuals", check_canonical(self))

    def entry(self, which: str, s: int, lam: int, k: int, lam_p: int) -> complex:
        m = self.u if which == "u" else self.v
        return m[mode_index(s, lam), mode_index(k, lam_p)]


def check_canonical(coeffs: CoeffMatrices) -> CanonicalResiduals:
    u, v = coeffs.u, coeffs.v
    eye = np.eye(u.shape[0])
    r1 = np.max(np.abs(u @ u.conj().T - v @ v.conj().T - eye))
    r2 = np.max(np.abs(v @ u.T - u @ v.T))
    return CanonicalResiduals(float(r1), float(r2))


def _plus(t: float, k: float, gap: float) -> float:
    return (t + k) / (2.0 * math.sqrt(t * k) * gap)


def _minus(t: float, k: float) -> float:
    return 1.0 / (2.0 * math.sqrt(t * k) * (t + k))


def _free_2x2(params: ModelParams, roots: FreeRoots) -> tuple[np.ndarray, np.ndarray]:
    kap = params.kappa
    u = np.empty((2, 2))
    v = np.empty((2, 2))
    for sp in (1, 2):
        t = roots.tau[sp - 1]
        gaps = [roots.gap(sp, s) for s in (1, 2)]
        q = 1.0 / math.sqrt(sum(g**-2 for g in gaps))
        for s in (1, 2):
            k = kap[s - 1]
            u[s - 1, sp - 1] = _plus(t, k, gaps[s - 1]) * q
            v[s - 1, sp - 1] = _minus(t, k) * q
    return u, v


def free_coeffs_2x2(params: ModelParams, roots: FreeRoots | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Polarization-independent 2x2 blocks u_{s,s'}, v_{s,s'}."""
    if params.epsilon == 0:
        return np.eye(2), np.zeros((2, 2))
    return _free_2x2(params, roots or free_roots_closed(params))


def _embed_free(u2: np.ndarray, v2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # u_{s,lam; s',lam'} = u_{s,s'} delta_{lam,lam'}
    return np.kron(u2, np.eye(2)), np.kron(v2, np.eye(2))


def free_coeffs(params: ModelParams, roots: FreeRoots | None = None) -> CoeffMatrices:
    u, v = _embed_free(*free_coeffs_2x2(params, roots))
    return CoeffMatrices(u, v, "free")


def free_coeffs_asymptotic(params: ModelParams) -> CoeffMatrices:
    """First-order forms:

    u_{s,s'} = delta + (1 - delta) eps / (2 sqrt(k1 k2) (k_{s'} - k_s))
    v_{s,s'} = eps / (2 sqrt(k_s k_{s'}) (k_s + k_{s'}))
    """
    kap = params.kappa
    eps = params.epsilon
    km = params.kappa_mean
    u2 = np.eye(2)
    v2 = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            if i != j:
                u2[i, j] = eps / (2 * km * (kap[j] - kap[i]))
            v2[i, j] = eps / (2 * math.sqrt(kap[i] * kap[j]) * (kap[i] + kap[j]))
    u, v = _embed_free(u2, v2)
    return CoeffMatrices(u, v, "free")


def polarization_factor(lam: int, lam_p: int) -> complex:
    """(-1)^(lam'-1) delta_{lam,1} - i delta_{lam,2}."""
    if lam == 1:
        return 1.0 if lam_p == 1 else -1.0
    return -1j


def magnetic_norm(params: ModelParams, roots: MagneticRoots, k: int, lam: int) -> float:
    """q_{k,lam} = [(-1)^lam omega / (tau^3 eps) + 2 sum_s (tau^2 - kappa_s^2)^-2]^(-1/2)."""
    t = roots.tau[(k, lam)]
    sign = 1.0 if lam % 2 == 0 else -1.0
    rad = sign * params.omega / (t**3 * params.epsilon)
    rad += 2.0 * sum(roots.gap((k, lam), s) ** -2 for s in (1, 2))
    if not rad > 0:
        raise RadicandError(f"q radicand {rad:.3g} <= 0 for (k, lam) = ({k}, {lam})")
    return 1.0 / math.sqrt(rad)


def magnetic_coeffs(params: ModelParams, roots: MagneticRoots | None = None,
                    guard_band: float | None = 0.05) -> CoeffMatrices:
    """Photon-block magnetic coefficients with tau^2 - kappa^2 denominators."""
    u = np.zeros((4, 4), dtype=complex)
    v = np.zeros((4, 4), dtype=complex)
    nan = np.full(4, np.nan, dtype=complex)
    if params.epsilon == 0:
        # limit q / gap -> 1/sqrt(2): only the s = k blocks survive
        for s in (1, 2):
            for lam in (1, 2):
                for lp in (1, 2):
                    u[mode_index(s, lam), mode_index(s, lp)] = polarization_factor(lam, lp) / math.sqrt(2)
        return CoeffMatrices(u, v, "magnetic", nan, nan.copy())
    if roots is None:
        roots = magnetic_roots(params, guard_band=guard_band)
    for k in (1, 2):
        for lp in (1, 2):
            key = (k, lp)
            t = roots.tau[key]
            q = magnetic_norm(params, roots, k, lp)
            for s in (1, 2):
                kap = params.kappa[s - 1]
                up = _plus(t, kap, roots.gap(key, s)) * q
                vm = _minus(t, kap) * q
                for lam in (1, 2):
                    f = polarization_factor(lam, lp)
                    u[mode_index(s, lam), mode_index(k, lp)] = f * up
                    v[mode_index(s, lam), mode_index(k, lp)] = f * vm
    return CoeffMatrices(u, v, "magnetic", nan, nan.copy())
