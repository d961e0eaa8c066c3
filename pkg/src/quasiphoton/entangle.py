"""Two-photon states of quasi-photon pairs and their entanglement.

The state c^dag_{1,lam1} c^dag_{2,lam2} |0> is expanded in free photons,
keeping only the cross-frequency terms a^dag_{1,lamA} a^dag_{2,lamB}|0>.
Qubit A is the polarization of the frequency-1 photon, qubit B that of the
frequency-2 photon; basis index 2(lamA - 1) + (lamB - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bogoliubov import free_coeffs_2x2, magnetic_coeffs, mode_index
from .params import ModelParams
from .spectrum import MagneticRoots, ResonanceError, free_roots_closed, magnetic_roots
from .twoqubit import EntanglementReport, TwoQubitState, analyse, report_from_eigenvalues

ZERO_REPORT = EntanglementReport(y=1.0, lam=(0.0, 1.0), E=0.0, E_S=0.0)

LN2 = math.log(2.0)


def _check_pol(lam1: int, lam2: int) -> None:
    if lam1 not in (1, 2) or lam2 not in (1, 2):
        raise ValueError("polarizations must be 1 or 2")


def pair_amplitudes(u: np.ndarray, lam1: int, lam2: int) -> np.ndarray:
    """Unnormalized upsilon_j of c^dag_{1,lam1} c^dag_{2,lam2}|0>.

    upsilon(lamA, lamB) = u_{1,lamA} u~_{2,lamB} + u_{2,lamB} u~_{1,lamA}
    with u = column (1, lam1) and u~ = column (2, lam2) of the u matrix.
    """
    c1, c2 = mode_index(1, lam1), mode_index(2, lam2)
    out = np.zeros(4, dtype=complex)
    for la in (1, 2):
        for lb in (1, 2):
            r1, r2 = mode_index(1, la), mode_index(2, lb)
            out[2 * (la - 1) + (lb - 1)] = u[r1, c1] * u[r2, c2] + u[r2, c1] * u[r1, c2]
    return out


# -- free case ---------------------------------------------------------------

@dataclass(frozen=True)
class FreeTwoPhotonState:
    polarizations: tuple[int, int]
    v1: float  # exchanged term u21 u12
    v2: float  # direct term u11 u22
    C: float

    @property
    def separable(self) -> bool:
        return self.polarizations[0] == self.polarizations[1]

    def amplitudes(self) -> np.ndarray:
        """Embedding into the two-qubit basis."""
        l1, l2 = self.polarizations
        out = np.zeros(4, dtype=complex)
        out[2 * (l1 - 1) + (l2 - 1)] += self.v2
        out[2 * (l2 - 1) + (l1 - 1)] += self.v1
        return out / np.linalg.norm(out)

    def two_qubit(self) -> TwoQubitState:
        return TwoQubitState(tuple(self.amplitudes()))


def free_state(params: ModelParams, lam1: int, lam2: int, roots=None, coeffs=None) -> FreeTwoPhotonState:
    _check_pol(lam1, lam2)
    if coeffs is None:
        u2, _ = free_coeffs_2x2(params, roots)
    else:
        u2 = coeffs.u[::2, ::2].real
    x = u2[1, 0] * u2[0, 1]
    d = u2[0, 0] * u2[1, 1]
    r = math.hypot(x, d)
    return FreeTwoPhotonState((lam1, lam2), x / r, d / r, 1.0 / r)


def free_beta1(params: ModelParams, roots=None) -> float:
    """Small eigenvalue of the reduced density matrix of the free pair state.

    Written in the closed form beta_1 = eps^4 / (eps^4 + (d + B)^4 G^2),
    d = (k1^2 - k2^2)/2, B = sgn(k1 - k2) sqrt(eps^2 + d^2) and
    G = (t1 + k1)(t2 + k2) / ((t1 + k2)(t2 + k1)), free of cancellation.
    """
    eps = params.epsilon
    if eps == 0:
        return 0.0
    roots = roots or free_roots_closed(params)
    k1, k2 = params.kappa
    t1, t2 = roots.tau
    d = (k1**2 - k2**2) / 2.0
    dB = d + roots.B_disc
    G = (t1 + k1) * (t2 + k2) / ((t1 + k2) * (t2 + k1))
    # scale-free ratio to avoid overflow in SI units
    ratio = (dB / eps) ** 4 * G**2
    beta = 1.0 / (1.0 + ratio)
    return min(beta, 1.0 - beta)


def free_measures(params: ModelParams, lam1: int, lam2: int, roots=None) -> EntanglementReport:
    _check_pol(lam1, lam2)
    if lam1 == lam2 or params.epsilon == 0:
        return ZERO_REPORT
    b1 = free_beta1(params, roots)
    return report_from_eigenvalues(b1, 1.0 - b1)


@dataclass(frozen=True)
class AsymptoticPrediction:
    Phi0: float
    Phi_omega: float
    E_asym: float
    E_S_asym: float


def _entropy_asym(phi: float, eps: float) -> float:
    # (phi / (2 ln 2)) [eps^4 (1 - ln(phi/2)) - 4 eps^4 ln eps]
    if eps == 0 or phi == 0:
        return 0.0
    e4 = eps**4
    return phi / (2 * LN2) * e4 * (1.0 - math.log(e4 * phi / 2.0))


def phi0(params: ModelParams) -> float:
    """Phi_0 = 2 (Delta kappa)^-4 / (4 k1 k2)^2."""
    return 2.0 * params.delta_kappa**-4 / (4.0 * params.kappa_1 * params.kappa_2) ** 2


def free_asymptotics(params: ModelParams) -> AsymptoticPrediction:
    p = phi0(params)
    eps = params.epsilon
    return AsymptoticPrediction(p, p, _entropy_asym(p, eps), eps**4 * p)


# -- magnetic case -----------------------------------------------------------

@dataclass(frozen=True)
class MagneticTwoPhotonState:
    upsilon: tuple[complex, complex, complex, complex]
    a: float
    b: float
    C: float

    def two_qubit(self) -> TwoQubitState:
        return TwoQubitState.normalized(self.upsilon)


def _F(k: float, t: float) -> float:
    return math.sqrt(k / t) + math.sqrt(t / k)


def magnetic_ab(params: ModelParams, roots: MagneticRoots | None = None,
                guard_band: float | None = 0.05) -> tuple[float, float]:
    """Intermediates a, b of the |2,1> state, from tau_12 and tau_21."""
    eps, omega = params.epsilon, params.omega
    k1, k2 = params.kappa
    if eps == 0:
        return 0.0, 0.5
    roots = roots or magnetic_roots(params, guard_band=guard_band)
    t12, t21 = roots.tau[(1, 2)], roots.tau[(2, 1)]
    g = roots.gap
    rad21 = 2 / g((2, 1), 1) ** 2 + 2 / g((2, 1), 2) ** 2 - omega / (t21**3 * eps)
    rad12 = 2 / g((1, 2), 1) ** 2 + 2 / g((1, 2), 2) ** 2 + omega / (t12**3 * eps)
    for key, rad in (((2, 1), rad21), ((1, 2), rad12)):
        if not rad > 0:
            raise ArithmeticError(f"negative radicand {rad:.3g} for (k, lam) = {key}")
    norm = math.sqrt(rad21) * math.sqrt(rad12)
    a = _F(k1, t21) * _F(k2, t12) / (4 * g((1, 2), 2) * g((2, 1), 1) * norm)
    b = _F(k1, t12) * _F(k2, t21) / (4 * g((1, 2), 1) * g((2, 1), 2) * norm)
    return a, b


def magnetic_state(params: ModelParams, roots: MagneticRoots | None = None,
                   guard_band: float | None = 0.05) -> MagneticTwoPhotonState:
    a, b = magnetic_ab(params, roots, guard_band)
    ups = (-(a + b), -1j * (a - b), 1j * (a - b), -(a + b))
    return MagneticTwoPhotonState(ups, a, b, 0.5 / abs(a * a + b * b))


def magnetic_pair_state(params: ModelParams, lam1: int, lam2: int,
                        roots: MagneticRoots | None = None,
                        guard_band: float | None = 0.05) -> TwoQubitState:
    """General c^dag_{1,lam1} c^dag_{2,lam2}|0> from the coefficient matrices."""
    _check_pol(lam1, lam2)
    coeffs = magnetic_coeffs(params, roots, guard_band)
    return TwoQubitState.normalized(pair_amplitudes(coeffs.u, lam1, lam2))


def magnetic_measures(params: ModelParams, lam1: int, lam2: int,
                      roots: MagneticRoots | None = None,
                      guard_band: float | None = 0.05) -> EntanglementReport:
    """Measures of c^dag_{1,lam1} c^dag_{2,lam2}|0>; parallel pairs are exactly 0."""
    _check_pol(lam1, lam2)
    if lam1 == lam2 or params.epsilon == 0:
        return ZERO_REPORT
    if (lam1, lam2) == (1, 2):
        return analyse(magnetic_pair_state(params, 1, 2, roots, guard_band))
    a, b = magnetic_ab(params, roots, guard_band)
    a2, b2 = a * a, b * b
    small = min(a2, b2) / (a2 + b2)
    return report_from_eigenvalues(small, max(a2, b2) / (a2 + b2))


def phi_omega(params: ModelParams) -> AsymptoticPrediction:
    """Phi_omega = (Delta kappa)^-4 / (8 (omega - k1)^2 (omega + k2)^2)."""
    k1, k2 = params.kappa
    w = params.omega
    if w == k1:
        raise ResonanceError("Phi_omega diverges at omega = kappa_1")
    p = params.delta_kappa**-4 / (8.0 * (w - k1) ** 2 * (w + k2) ** 2)
    eps = params.epsilon
    return AsymptoticPrediction(phi0(params), p, _entropy_asym(p, eps), eps**4 * p)
