import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from quasiphoton.params import ModelParams, PhysicalInput, from_physical
from quasiphoton.spectrum import (OccupationNumbers, ResonanceError, free_roots_asymptotic,
                                  free_roots_closed, free_roots_numeric, magnetic_H0,
                                  magnetic_roots, magnetic_roots_asymptotic, quasiphoton_energy)

kappas = st.floats(0.2, 5.0)
couplings = st.floats(1e-9, 2.0)


def free_params(k1, k2, eps):
    assume(abs(k1 - k2) > 1e-3 * max(k1, k2))
    return ModelParams(k1, k2, eps)


def test_decoupled():
    r = free_roots_closed(ModelParams(1, 2, 0.0))
    assert r.tau == (1.0, 2.0) and r.H0 == 0.0


def test_reference_roots():
    r = free_roots_closed(ModelParams(1, 2, 0.1))
    assert r.tau_1 == pytest.approx(1.0472203025928735, rel=1e-15)
    assert r.tau_2 == pytest.approx(2.0256677017312814, rel=1e-15)
    assert max(r.residuals()) < 1e-12


def test_swap_symmetry():
    a = free_roots_closed(ModelParams(1, 2, 0.1))
    b = free_roots_closed(ModelParams(2, 1, 0.1))
    assert sorted(a.tau) == pytest.approx(sorted(b.tau), rel=1e-15)
    assert b.B_disc > 0 > a.B_disc


@given(kappas, kappas, couplings)
def test_closed_invariants(k1, k2, eps):
    r = free_roots_closed(free_params(k1, k2, eps))
    assert r.tau_1**2 + r.tau_2**2 == pytest.approx(2 * r.A, rel=1e-13)
    assert math.copysign(1, r.B_disc) == math.copysign(1, k1 - k2)
    assert min(r.tau) > 0 and max(r.residuals()) < 1e-12


@given(kappas, kappas, couplings)
def test_numeric_matches_closed(k1, k2, eps):
    p = free_params(k1, k2, eps)
    a, b = free_roots_closed(p), free_roots_numeric(p)
    assert b.tau == pytest.approx(a.tau, rel=1e-12)
    assert max(b.residuals()) < 1e-12


@given(kappas, kappas, st.floats(1e-6, 1.0), st.floats(1.01, 3.0))
def test_monotone_in_epsilon(k1, k2, eps, f):
    a = free_roots_closed(free_params(k1, k2, eps))
    b = free_roots_closed(free_params(k1, k2, eps * f))
    assert b.tau_1 > a.tau_1 and b.tau_2 > a.tau_2


@given(kappas, kappas, couplings, st.floats(0.1, 10.0))
def test_scale_covariance(k1, k2, eps, t):
    a = free_roots_closed(free_params(k1, k2, eps))
    b = free_roots_closed(ModelParams(k1 * t, k2 * t, eps * t * t))
    assert np.allclose(np.array(b.tau) / t, a.tau, rtol=1e-14, atol=0)


def test_branch_continuity():
    gaps = [np.array(free_roots_numeric(ModelParams(1, 2, e)).tau) - (1, 2)
            for e in (1e-3, 1e-6, 1e-9)]
    for s in range(2):
        seq = [g[s] for g in gaps]
        assert seq[0] > seq[1] > seq[2] > 0 and seq[2] < 1e-8


def test_reference_point_leading_order():
    p = from_physical(PhysicalInput(625e-9, 562e-9))
    r = free_roots_numeric(p)
    for s in range(2):
        lead = p.epsilon / (2 * p.kappa[s])
        assert (r.tau[s] - p.kappa[s]) / lead == pytest.approx(1.0, abs=0.02)


def test_asymptotic_third_order():
    errs = []
    eps_seq = (1e-2, 1e-3, 1e-4)
    for e in eps_seq:
        p = ModelParams(1, 2, e)
        errs.append(np.abs(np.array(free_roots_asymptotic(p).tau) - free_roots_closed(p).tau))
    errs = np.array(errs)
    for s in range(2):
        slope = np.polyfit(np.log(eps_seq), np.log(errs[:, s]), 1)[0]
        assert slope == pytest.approx(3.0, abs=0.2)


def test_asymptotic_first_order_ratio():
    for e in (1e-4, 1e-6):
        p = ModelParams(1, 2, e)
        r = free_roots_asymptotic(p)
        for s in range(2):
            assert (r.tau[s] - p.kappa[s]) * 2 * p.kappa[s] / e == pytest.approx(1, abs=10 * e)
    assert free_roots_asymptotic(ModelParams(1, 2, 0)).tau == (1, 2)


# -- magnetic ------------------------------------------------------------------

@pytest.mark.parametrize("omega", [0.3, 1.5, 3.0, 1e-9])
def test_magnetic_residuals(omega):
    r = magnetic_roots(ModelParams(1, 2, 0.05, omega))
    assert max(r.branch_residuals.values()) < 1e-12
    assert all(t > 0 for k, t in r.tau.items() if k != (0, 2))
    assert r.tau[(0, 2)] == 0.0


@given(kappas, kappas, st.floats(1e-6, 0.05), st.just(0.0) | st.floats(1e-250, 3.0))
@settings(max_examples=60)
def test_magnetic_residual_property(k1, k2, eps, w):
    p = free_params(k1, k2, eps)
    p = ModelParams(k1, k2, eps * min(k1, k2) * abs(k1 - k2), w * min(k1, k2))
    assume(min(abs(p.omega - k) / k for k in p.kappa) > 0.05)
    r = magnetic_roots(p)
    assert max(r.branch_residuals.values()) < 1e-12


@pytest.mark.parametrize("omega", [1e-200, 1e-30, 1e-8])
def test_tiny_omega_landau_root(omega):
    p = ModelParams(1, 2, 0.05, omega)
    r = magnetic_roots(p)
    assert max(r.branch_residuals.values()) < 1e-12
    # tau_0 -> omega / (1 + eps sum kappa^-2) for omega -> 0
    assert r.tau_0 == pytest.approx(omega / (1 + 0.05 * 1.25), rel=1e-6)


def test_magnetic_zero_omega_is_free():
    p = ModelParams(1, 2, 0.05, 0.0)
    r, f = magnetic_roots(p), free_roots_numeric(p)
    for k in (1, 2):
        for lam in (1, 2):
            assert r.tau[(k, lam)] == pytest.approx(f.tau[k - 1], rel=1e-14)
    assert r.tau_0 == 0.0


def test_magnetic_decoupling_limits():
    r = magnetic_roots(ModelParams(1, 2, 0.0, 0.3))
    assert r.tau[(1, 1)] == 1 and r.tau[(2, 2)] == 2 and r.tau_0 == 0.3
    small = magnetic_roots(ModelParams(1, 2, 1e-10, 0.3))
    assert small.tau_0 == pytest.approx(0.3, abs=1e-9)
    assert small.tau[(2, 1)] == pytest.approx(2, abs=1e-9)


def test_magnetic_branch_continuity():
    prev = None
    for e in (1e-2, 1e-4, 1e-6):
        r = magnetic_roots(ModelParams(1, 2, e, 0.3))
        d = np.array([abs(r.tau[(k, l)] - k) for k in (1, 2) for l in (1, 2)] + [abs(r.tau_0 - 0.3)])
        if prev is not None:
            assert np.all(d < prev)
        prev = d


def test_magnetic_asymptotic_second_order():
    errs = []
    eps_seq = (1e-2, 1e-3, 1e-4)
    for e in eps_seq:
        p = ModelParams(1, 2, e, 0.3)
        a, x = magnetic_roots_asymptotic(p), magnetic_roots(p)
        errs.append(max(abs(a.tau[k] - x.tau[k]) for k in a.tau))
    slope = np.polyfit(np.log(eps_seq), np.log(errs), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.2)


def test_magnetic_asymptotic_properties():
    p = ModelParams(1, 2, 1e-3, 0.3)
    a = magnetic_roots_asymptotic(p)
    assert a.tau[(1, 1)] < a.tau[(1, 2)] and a.tau[(2, 1)] < a.tau[(2, 2)]
    assert (0, 1) not in a.tau
    z = magnetic_roots_asymptotic(ModelParams(1, 2, 1e-3, 0.0))
    assert z.tau[(2, 1)] == 2 + 1e-3 / 4


def test_resonance_guard():
    with pytest.raises(ResonanceError):
        magnetic_roots(ModelParams(1, 2, 0.01, 1.02))
    r = magnetic_roots(ModelParams(1, 2, 0.01, 1.02), guard_band=None)
    assert max(r.branch_residuals.values()) < 1e-12


def test_magnetic_scale_covariance():
    a = magnetic_roots(ModelParams(1, 2, 0.05, 0.3))
    b = magnetic_roots(ModelParams(3, 6, 0.45, 0.9))
    for k, t in a.tau.items():
        assert b.tau[k] == pytest.approx(3 * t, rel=1e-14, abs=0)


# -- energies --------------------------------------------------------------------

def test_energy_free():
    p = ModelParams(1, 2, 0.1)
    r = free_roots_closed(p)
    assert quasiphoton_energy(r, OccupationNumbers()).E_ph == r.H0
    e = quasiphoton_energy(r, OccupationNumbers({(1, 2): 1, (2, 1): 1})).E_ph
    assert e == pytest.approx(r.tau_1 + r.tau_2 + r.H0, rel=1e-15)
    e = quasiphoton_energy(r, OccupationNumbers({(1, 1): 2})).E_ph
    assert e == pytest.approx(2 * r.tau_1 + r.H0, rel=1e-15)
    assert r.H0 == pytest.approx(sum(r.tau) - 3, rel=1e-12)


def test_energy_magnetic():
    p = ModelParams(1, 2, 0.05, 0.3)
    r = magnetic_roots(p)
    occ = OccupationNumbers({(1, 2): 1}, N0=2)
    e = quasiphoton_energy(r, occ, magnetic=True, np_=10.0, mass=0.5, p3=0.2)
    H0 = magnetic_H0(r)
    assert e.E_ph == pytest.approx(r.tau[(1, 2)] + H0, rel=1e-15)
    assert e.E_K == pytest.approx(e.E_ph + 2 * r.tau_0 + (0.25 / 10 + 0.3) / 2, rel=1e-15)
    # eB (2 tau0/omega N0 + 1) with eB = omega np
    assert e.p0_squared == pytest.approx(0.3 * 10 * (2 * r.tau_0 / 0.3 * 2 + 1) + 0.04 + 0.25)
    # exact vacuum of the quadratic form: half the frequencies minus the bare photon terms
    full = 0.5 * sum(r.tau[k] for k in ((1, 1), (1, 2), (2, 1), (2, 2))) + 0.5 * r.tau_0 - 3
    assert H0 + 0.3 / 2 == pytest.approx(full, rel=1e-12)


def test_energy_misuse():
    p = ModelParams(1, 2, 0.05, 0.3)
    with pytest.raises(TypeError):
        quasiphoton_energy(free_roots_closed(p), OccupationNumbers(), magnetic=True)
    with pytest.raises(TypeError):
        quasiphoton_energy(magnetic_roots(p), OccupationNumbers())
    with pytest.raises(ValueError):
        quasiphoton_energy(free_roots_closed(p), OccupationNumbers(N0=1))
    with pytest.raises(ValueError):
        OccupationNumbers({(1, 1): -1})
