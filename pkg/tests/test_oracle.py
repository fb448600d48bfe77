import numpy as np
import pytest
from numpy.testing import assert_allclose

from specmat import (CMatrix2, NearSpectrum, ResolutionTooLow, discretize,
                     growth_probe, oracle_spectrum, resolvent_norm, spectrum)
from conftest import EXAMPLE, a4

import scipy.linalg


def lattice(coeffs, kmax=12):
    return sorted({c * k**2 * np.pi**2 for c in coeffs for k in range(kmax)},
                  key=abs)


class TestDiscretize:
    def test_diagonal_low_eigenvalues(self):
        disc = discretize(CMatrix2.real(1, 0, 0, 1), 200)
        ev = np.sort(np.abs(scipy.linalg.eigvals(disc.M)))
        targets = [0, np.pi**2, np.pi**2, 4 * np.pi**2, 4 * np.pi**2]
        for got, want in zip(ev[:5], targets):
            assert abs(got - want) <= 1e-3 * (1 + want)

    def test_triangular_lattice(self):
        disc = discretize(CMatrix2.real(1, 0, 1, 4), 200)
        ev = scipy.linalg.eigvals(disc.M)
        ev = np.sort_complex(ev[np.argsort(np.abs(ev))][:8])
        for got in ev:
            err = min(abs(got - want) for want in lattice((1, 4)))
            assert err <= 1e-3 * (1 + abs(got))

    @pytest.mark.parametrize("A", [CMatrix2.real(1, 0, 0, 4),
                                   CMatrix2.real(1, 0, 1, 4),
                                   CMatrix2.real(0.8, 1, 0, -2)])
    def test_richardson_ratio_second_order(self, A):
        # the discretization error of each low nonzero eigenvalue shrinks
        # by ~4 when the grid is refined 2x
        coarse = discretize(A, 100)
        fine = discretize(A, 200)
        evc = scipy.linalg.eigvals(coarse.M)
        evf = scipy.linalg.eigvals(fine.M)
        evc = evc[np.argsort(np.abs(evc))]
        evf = evf[np.argsort(np.abs(evf))]
        exact = lattice((A.a.real, A.d.real))
        for j in range(1, 7):
            target = exact[j]
            ec = np.min(np.abs(evc - target))
            ef = np.min(np.abs(evf - target))
            assert 3.5 <= ec / ef <= 4.5, (A, target, ec / ef)

    def test_resolution_floor(self):
        with pytest.raises(ResolutionTooLow):
            discretize(CMatrix2.real(1, 0, 0, 1), 4)

    def test_lattice_value_matches_scalar_stencil(self):
        disc = discretize(CMatrix2.real(1, 0, 0, 1), 100)
        # the discrete image of pi^2 k^2 converges to it
        assert abs(disc.lattice_value(1.0, 3) - 9 * np.pi**2) < 0.1


class TestOracleSpectrum:
    def test_example_matrix_two_resolutions(self):
        lam = np.arccos(complex(-0.5, 0.5))
        disc = discretize(EXAMPLE, 200)
        sp = oracle_spectrum(disc, 8, companion=discretize(EXAMPLE, 100))
        vals = sp.values()
        for target in (0, lam**2, np.conj(lam) ** 2, 4 * np.pi**2):
            rel = np.min(np.abs(vals - target)) / (1 + abs(target))
            assert rel < 1e-2
        assert sp.method == "oracle"
        assert len(sp.residuals) == 8

    def test_diagonal_trivial(self):
        sp = oracle_spectrum(discretize(CMatrix2.real(1, 0, 0, 4), 150), 6)
        for v, _ in sp.eigenvalues:
            err = min(abs(v - want) for want in lattice((1, 4)))
            assert err <= 1e-2 * (1 + abs(v))

    def test_curve_point_negative_eigenvalues(self):
        # the nonzero eigenvalues here are double: the discretization splits
        # each into a pair whose mean converges at second order
        sp = oracle_spectrum(discretize(a4(-1.0, 0.0), 300), 5)
        vals = np.sort(sp.values().real)   # ascending: most negative first
        pair2 = 0.5 * (vals[0] + vals[1])
        pair1 = 0.5 * (vals[2] + vals[3])
        assert_allclose([pair2, pair1],
                        [-16 * np.pi**2 / 3, -4 * np.pi**2 / 3], rtol=3e-3)
        assert abs(vals[4]) < 1e-6

    def test_singular_flag(self):
        sp = oracle_spectrum(discretize(CMatrix2.real(1, 0, 0, 0), 100), 6)
        assert any("not-closed" in n for n in sp.notes)
        sp_ok = oracle_spectrum(discretize(CMatrix2.real(1, 0, 0, 2), 100), 6)
        assert not any("not-closed" in n for n in sp_ok.notes)

    def test_trust_radius(self):
        with pytest.raises(ResolutionTooLow):
            oracle_spectrum(discretize(CMatrix2.real(1, 0, 0, 1), 20), 40)

    def test_conjugate_symmetry_real_matrix(self):
        M = discretize(a4(0.0, 2.5), 100).M
        ev = scipy.linalg.eigvals(M)
        scale = np.linalg.norm(M, ord="fro")
        for v in ev[np.argsort(np.abs(ev))][:20]:
            assert np.min(np.abs(ev - np.conj(v))) <= 1e-11 * scale

    def test_agreement_with_secular_spectra(self, region_corpus):
        # two-resolution bars: tolerance of 5x the reported estimate plus a
        # small floor covers both first- and second-order convergent modes
        for A in region_corpus[:12]:
            sec = spectrum(A, count=8)
            sec_vals = sec.with_multiplicity()
            disc = discretize(A, 200)
            orc = oracle_spectrum(disc, 6, companion=discretize(A, 100))
            for v, err in zip(orc.values(), orc.residuals):
                gap = np.min(np.abs(sec_vals - v))
                assert gap <= 5 * err + 1e-4 * (1 + abs(v)), (A, v, gap, err)


class TestResolventNorm:
    def test_self_adjoint_distance_formula(self):
        disc = discretize(CMatrix2.real(1, 0, 0, 1), 200)
        assert_allclose(resolvent_norm(disc, -1.0), 1.0, rtol=5e-2)
        for z in (-4.0, 20 + 5j, 60.0):
            dist = min(abs(z - v) for v in lattice((1, 1), 20))
            if dist >= 1:
                assert_allclose(resolvent_norm(disc, z), 1 / dist, rtol=5e-2)

    def test_invit_matches_svd(self):
        disc = discretize(CMatrix2.real(1, 0, 1, 1), 150)
        z = 30 + 1j
        n_svd = resolvent_norm(disc, z, method="svd")
        n_it = resolvent_norm(disc, z, method="invit")
        assert_allclose(n_it, n_svd, rtol=1e-6)

    def test_near_spectrum_guard(self):
        disc = discretize(CMatrix2.real(1, 0, 0, 1), 100)
        ev = scipy.linalg.eigvals(disc.M)
        ev = ev[np.argsort(np.abs(ev))]
        with pytest.raises(NearSpectrum):
            resolvent_norm(disc, complex(ev[1]) + 1e-13)

    def test_whole_real_line_regime_stays_bounded(self):
        # similarity to self-adjoint predicts k / dist(z, R) behaviour
        disc = discretize(a4(2.0, -1.0), 200)
        for re in (0.0, 40.0, 120.0, 300.0):
            assert resolvent_norm(disc, re + 1j) <= 30.0


class TestGrowthProbe:
    def test_jordan_type_growth(self):
        probe = growth_probe(CMatrix2.real(1, 0, 1, 1), 1.0, range(2, 7), n=150)
        assert probe.slope("coarse") >= 0.4
        assert probe.slope("fine") >= 0.4
        norms = [r.norm_2n for r in probe.rows]
        assert all(x < y for x, y in zip(norms, norms[1:]))

    def test_upper_triangular_growth(self):
        probe = growth_probe(CMatrix2.real(1, 1, 0, 1), 1.0, range(2, 7), n=150)
        assert probe.slope("fine") >= 0.4

    def test_diagonal_flat(self):
        probe = growth_probe(CMatrix2.real(1, 0, 0, 1), 1.0, range(2, 7), n=150)
        assert abs(probe.slope("fine")) <= 0.05
        for row in probe.rows:
            assert_allclose(row.norm_2n, 1.0, rtol=5e-3)

    def test_continuum_anchor_available(self):
        probe = growth_probe(CMatrix2.real(1, 0, 0, 1), 1.0, range(2, 4),
                             n=100, anchor="continuum")
        assert probe.anchor == "continuum"
        assert len(probe.rows) == 2
