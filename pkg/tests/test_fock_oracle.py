import numpy as np
import pytest

from quasiphoton.entangle import free_measures
from quasiphoton.fock_oracle import (LANDAU, PHOTON_MODES, ConvergenceReport, DimensionError,
                                     SpectrumReport, TruncatedBasis, _ladder, _ops,
                                     build_hk_magnetic, build_hph, entanglement_oracle,
                                     free_level_predictions, magnetic_level_predictions,
                                     run_oracle, spectrum_check, two_photon_projection)
from quasiphoton.params import ModelParams
from quasiphoton.twoqubit import TwoQubitState, analyse

P = ModelParams(1, 2, 0.05)
PM = ModelParams(1, 2, 0.05, 0.3)


def test_basis_layout():
    b = TruncatedBasis(PHOTON_MODES, 3)
    assert b.dim == 256
    occ = b.occupations()
    assert occ.shape == (256, 4)
    for i in (0, 17, 255):
        assert b.index(occ[i]) == i
    assert b.mode_pos((2, 1)) == 2


def test_basis_limits():
    with pytest.raises(DimensionError):
        TruncatedBasis(PHOTON_MODES + (LANDAU,), 10, dim_cap=1000)
    with pytest.raises(ValueError):
        TruncatedBasis(PHOTON_MODES, 0)


def test_compressed_squares():
    ops = _ops(4)
    x2 = ops["x2"].toarray()
    # <n|(a + a^dag)^2|n> = 2n + 1, including the top retained level
    assert np.allclose(np.diag(x2), [1, 3, 5, 7])
    # x^2 + p^2 = 2 (2 a^dag a + 1)
    assert np.allclose(x2 + ops["p2"].toarray(), np.diag([2, 6, 10, 14]))


def test_decoupled_spectrum_exact():
    p = ModelParams(1, 2, 0.0)
    m = build_hph(p, 3)
    r = spectrum_check(m, free_level_predictions(p, 6, 3), 6)
    assert r.max_deviation < 1e-13
    assert list(r.predicted) == [0, 1, 1, 2, 2, 2]


def test_free_spectrum_converges():
    devs = [spectrum_check(build_hph(P, c), free_level_predictions(P, 6, c), 6).max_relative
            for c in (3, 4, 5)]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-6


def test_hermitian():
    assert build_hph(P, 3).hermiticity() == 0.0
    assert build_hk_magnetic(PM, 2).hermiticity() == 0.0


def test_real_gauge_preserves_spectrum():
    a = np.linalg.eigvalsh(build_hk_magnetic(PM, 2, real_gauge=False).H.toarray())
    b = np.linalg.eigvalsh(build_hk_magnetic(PM, 2).H.toarray())
    assert np.abs(a - b).max() < 1e-12


def test_magnetic_levels_converge():
    m = build_hk_magnetic(PM, 3)
    dev = np.abs(m.lowest(3) - magnetic_level_predictions(PM, 3, 3))
    assert dev[0] < 1e-7 and dev.max() < 1e-3


def test_ladder_multiplicities():
    lv = _ladder((1.0, 1.0, 2.0), 0.5, 5)
    assert list(lv) == [0.5, 1.5, 1.5, 2.5, 2.5]
    assert list(_ladder((1.0,), 0.0, 5, cutoff=2)) == [0.0, 1.0, 2.0]


def test_entanglement_oracle_matches_pipeline():
    rng = np.random.default_rng(7)
    for _ in range(50):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        a = entanglement_oracle(z)
        b = analyse(TwoQubitState.normalized(z))
        assert a.E == pytest.approx(b.E, abs=1e-12)


def test_free_projection():
    pr = two_photon_projection(build_hph(P, 4))
    E = entanglement_oracle(pr.amplitudes).E
    assert E == pytest.approx(free_measures(P, 2, 1).E, rel=1e-5)
    assert 0 < pr.remainder < 0.05
    assert pr.same_weight < 1e-3
    assert pr.gap > 0


def test_convergence_report_floor():
    def rep(d):
        return SpectrumReport(4, np.zeros(1), np.array([d]))
    assert ConvergenceReport((rep(1e-3), rep(1e-5)), 1e-14).decreasing
    assert ConvergenceReport((rep(1e-15), rep(2e-15)), 1e-14).decreasing
    assert not ConvergenceReport((rep(1e-5), rep(1e-3)), 1e-14).decreasing


def test_run_oracle_free():
    run = run_oracle(ModelParams(1, 2, 0.05), [4, 6])
    assert run.spectrum.decreasing
    assert run.entanglement_deviation <= run.entanglement_budget
    assert {r.check for r in run.rows} == {"level", "entanglement"}


def test_run_oracle_rejects_cutoffs():
    with pytest.raises(ValueError):
        run_oracle(P, [4, 4])
    with pytest.raises(DimensionError):
        run_oracle(P, [4, 30])
