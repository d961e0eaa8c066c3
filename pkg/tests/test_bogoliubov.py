import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from quasiphoton.bogoliubov import (RadicandError, free_coeffs, free_coeffs_2x2,
                                    free_coeffs_asymptotic, magnetic_coeffs, mode_index,
                                    polarization_factor)
from quasiphoton.params import ModelParams
from quasiphoton.spectrum import ResonanceError


def test_mode_index():
    assert [mode_index(s, l) for s in (1, 2) for l in (1, 2)] == [0, 1, 2, 3]


def test_reference_blocks():
    u, v = free_coeffs_2x2(ModelParams(1, 2, 0.1))
    np.testing.assert_allclose(u, [[0.9997121051314286, 0.03537231821188815],
                                   [-0.03503452425881937, 0.9994664522011429]], rtol=1e-14)
    np.testing.assert_allclose(v, [[0.02305892924678188, 0.01199082249003596],
                                   [0.01095430592718138, 0.00637260913872448]], rtol=1e-14)


def test_decoupled_identity():
    c = free_coeffs(ModelParams(1, 2, 0))
    assert np.array_equal(c.u, np.eye(4)) and not c.v.any()


@given(st.floats(0.2, 5), st.floats(0.2, 5), st.floats(1e-8, 2.0))
def test_free_canonical(k1, k2, eps):
    assume(abs(k1 - k2) > 1e-3 * max(k1, k2))
    c = free_coeffs(ModelParams(k1, k2, eps))
    assert c.canonical_residuals.ok(1e-12)
    # polarization blocks never mix
    assert not c.u[0::2, 1::2].any() and not c.v[1::2, 0::2].any()


def test_asymptotic_second_order():
    errs = []
    eps_seq = (1e-2, 1e-3, 1e-4)
    for e in eps_seq:
        p = ModelParams(1, 2, e)
        a, x = free_coeffs_asymptotic(p), free_coeffs(p)
        errs.append(max(np.abs(a.u - x.u).max(), np.abs(a.v - x.v).max()))
    slope = np.polyfit(np.log(eps_seq), np.log(errs), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.2)


def test_asymptotic_v_diagonal():
    c = free_coeffs_asymptotic(ModelParams(1, 4, 0.2))
    assert c.entry("v", 1, 1, 1, 1) == pytest.approx(0.2 / 4)
    assert c.entry("v", 2, 2, 2, 2) == pytest.approx(0.2 / 64)
    assert c.entry("v", 1, 1, 2, 1) == pytest.approx(0.2 / (2 * 2 * 5))


def test_polarization_factor():
    assert [polarization_factor(l, lp) for l in (1, 2) for lp in (1, 2)] == [1, -1, -1j, -1j]


def test_magnetic_zero_omega_canonical():
    assert magnetic_coeffs(ModelParams(1, 2, 0.05, 0.0)).canonical_residuals.ok(1e-12)


def test_magnetic_reference_entries():
    c = magnetic_coeffs(ModelParams(1, 2, 0.05, 0.3))
    assert c.u[0, 0] == pytest.approx(0.7085412383258255, rel=1e-13)
    assert c.u[2, 3] == pytest.approx(-0.7065117833204446, rel=1e-13)
    assert c.v[1, 2] == pytest.approx(-0.003655794604119743j, rel=1e-13)
    assert np.isnan(c.landau_u).all()


def test_magnetic_residual_tracks_landau_weight():
    # the photon block is not closed without the Landau column; the defect is O(omega)
    r = [magnetic_coeffs(ModelParams(1, 2, 0.05, w)).canonical_residuals.unitarity
         for w in (1e-1, 1e-2, 1e-3)]
    slope = np.polyfit(np.log([1e-1, 1e-2, 1e-3]), np.log(r), 1)[0]
    assert slope == pytest.approx(1.0, abs=0.05)


def test_magnetic_decoupled():
    c = magnetic_coeffs(ModelParams(1, 2, 0.0, 0.3))
    assert c.canonical_residuals.ok(1e-15)
    assert c.u[1, 0] == pytest.approx(-1j / np.sqrt(2))


def test_magnetic_guard():
    with pytest.raises(ResonanceError):
        magnetic_coeffs(ModelParams(1, 2, 0.05, 1.01))


def test_radicand_error_is_arithmetic():
    assert issubclass(RadicandError, ArithmeticError)
