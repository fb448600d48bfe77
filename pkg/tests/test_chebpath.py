import numpy as np
import pytest
from numpy.testing import assert_allclose

from specmat import (DegreeTooHigh, OutOfDomain, Rect, RegionTag, build,
                     build_g, cheb_spectrum, chebyshev_t, classify_region,
                     lambda_curve, level_curve_d, spectrum, winding_count)


class TestLevelCurve:
    def test_alpha_3_at_zero(self):
        assert_allclose(level_curve_d(3.0, +1, 0.0), 10.0 / 3.0, rtol=1e-12)

    def test_alpha_2_at_zero(self):
        pt = lambda_curve(2, 1, +1, 0.0)
        assert_allclose(pt.d, 2.5, rtol=1e-14)
        assert_allclose((pt.b_plus, pt.b_minus), (2.0, 0.5), rtol=1e-12)

    def test_alpha_nine_eighths(self):
        pt = lambda_curve(9, 8, +1, -0.5)
        assert_allclose(pt.d, 1.5035, atol=5e-5)

    def test_ratio_identity_along_curves(self):
        for p, q, sign in [(2, 1, +1), (3, 2, +1), (7, 4, -1)]:
            lo = -0.9 if sign > 0 else 1.05
            for a in np.linspace(lo, lo + 4, 100):
                pt = lambda_curve(p, q, sign, float(a))
                assert abs(np.sqrt(pt.b_plus / pt.b_minus) - p / q) <= 1e-10 * (1 + p / q)
                assert classify_region(pt.a, pt.d).tag is RegionTag.R3

    def test_fraction_reduced(self):
        pt = lambda_curve(4, 2, +1, 0.0)
        assert (pt.p, pt.q) == (2, 1)

    @pytest.mark.parametrize("p,q,sign,a", [
        (1, 1, +1, 0.0),      # ratio not > 1
        (2, 1, +1, -1.0),     # at the domain edge
        (2, 1, -1, 0.5),      # lower branch needs a > 1
    ])
    def test_out_of_domain(self, p, q, sign, a):
        with pytest.raises(OutOfDomain):
            lambda_curve(p, q, sign, a)


class TestChebyshevT:
    def test_low_degrees(self):
        assert_allclose(chebyshev_t(0), [1])
        assert_allclose(chebyshev_t(1), [1, 0])
        assert_allclose(chebyshev_t(2), [2, 0, -1])
        assert_allclose(chebyshev_t(3), [4, 0, -3, 0])

    def test_cosine_identity(self):
        for m in (2, 5, 9, 17):
            z = np.linspace(0.1, 3.0, 40)
            assert_allclose(np.polyval(chebyshev_t(m), np.cos(z)), np.cos(m * z),
                            atol=1e-10)

    def test_example_value(self):
        assert_allclose(np.polyval(chebyshev_t(5), np.cos(0.7)), np.cos(3.5),
                        atol=1e-12)

    def test_degree_cap(self):
        with pytest.raises(DegreeTooHigh):
            chebyshev_t(65)


class TestBuildG:
    def test_cubic_at_origin_point(self):
        g = build_g(lambda_curve(2, 1, +1, 0.0))
        assert g.degree == 3
        assert_allclose(g.coeffs, [1, 0, -3, 2], atol=1e-12)   # (w-1)^2 (w+2)
        assert_allclose((g.k1, g.k2), (2.0, 2.5), rtol=1e-12)

    def test_g_at_one_always_zero(self):
        for p, q, a in [(2, 1, 0.3), (3, 2, -0.4), (5, 4, 1.7), (7, 2, 0.0)]:
            g = build_g(lambda_curve(p, q, +1, a))
            assert abs(g(1.0)) <= 1e-10 * np.linalg.norm(g.coeffs)

    @pytest.mark.parametrize("p,q,a", [(2, 1, 0.6), (3, 2, -0.5), (5, 2, 1.2)])
    def test_secular_identity_sampled(self, p, q, a):
        pt = lambda_curve(p, q, +1, a)
        g = build_g(pt)
        S = build(pt.matrix())
        rng = np.random.default_rng(61)
        xs = rng.uniform(0.3, 12, 50) + 1j * rng.uniform(-1, 1, 50)
        lhs = S.value(xs)
        rhs = g.scale * g(np.cos(xs / (pt.q * np.sqrt(pt.b_plus))))
        assert np.max(np.abs(lhs - rhs)) <= 1e-9 * np.max(np.abs(lhs))

    def test_degree_is_p_plus_q(self):
        assert build_g(lambda_curve(3, 2, +1, -0.5)).degree == 5


class TestChebSpectrum:
    def test_agrees_with_contour_search(self):
        pt = lambda_curve(2, 1, +1, 0.6)
        sp_c = cheb_spectrum(pt, 4, lambda2_max=250.0)
        sp_r = spectrum(pt.matrix(), count=10)
        vals_r = sp_r.values()
        for v, _ in sp_c.eigenvalues:
            if abs(v) > 200:
                continue
            gap = np.min(np.abs(vals_r - v))
            assert gap <= 1e-7 * (1 + abs(v)), (v, gap)

    def test_random_points_match_contour_search(self):
        # both routes produce the same eigenvalue set in the window
        rng = np.random.default_rng(63)
        ratios = [(2, 1), (3, 2), (4, 3), (5, 4), (5, 2), (4, 1), (3, 1),
                  (5, 3), (7, 2), (8, 1)]
        count = 0
        while count < 20:
            p, q = ratios[count % len(ratios)]
            a = float(rng.uniform(-0.8, 1.8))
            if abs(a) < 0.05:
                continue  # the a = 0 line has quadruple lattice zeros
            pt = lambda_curve(p, q, +1, a)
            n_max = int(np.ceil(14.2 / (2 * np.pi * pt.q * np.sqrt(pt.b_plus)))) + 2
            c_vals = np.array([v for v, _ in cheb_spectrum(pt, n_max).eigenvalues
                               if abs(v) <= 200])
            r_vals = np.array([v for v, _ in
                               spectrum(pt.matrix(),
                                        lambda_rect=Rect(0.0, 14.5, -14.47, 14.53)
                                        ).eigenvalues if abs(v) <= 200])
            for v in c_vals:
                assert np.min(np.abs(r_vals - v)) <= 1e-7 * (1 + abs(v))
            for v in r_vals:
                assert np.min(np.abs(c_vals - v)) <= 1e-7 * (1 + abs(v))
            count += 1

    def test_contains_zero_and_n_max_zero(self):
        pt = lambda_curve(3, 2, +1, -0.3)
        sp = cheb_spectrum(pt, 0)
        assert sp.eigenvalues[0] == (0j, 1)
        assert len(sp.eigenvalues) >= 2

    def test_double_roots_at_degenerate_point(self):
        # first entry 0: G has double roots at +-1, the real lattice carries
        # method multiplicity 2
        pt = lambda_curve(3, 1, +1, 0.0)
        sp = cheb_spectrum(pt, 3)
        real_pos = [(v, m) for v, m in sp.eigenvalues
                    if abs(v.imag) < 1e-9 and v.real > 1]
        assert real_pos and all(m == 2 for _, m in real_pos)
        assert_allclose(real_pos[0][0], 3 * np.pi**2, rtol=1e-10)

    def test_degree_cap_with_override(self):
        pt = lambda_curve(13, 8, +1, 0.4)
        with pytest.raises(DegreeTooHigh):
            cheb_spectrum(pt, 2)
        sp = cheb_spectrum(pt, 1, degree_cap=40)
        assert len(sp.eigenvalues) > 3

    def test_periodicity_of_zero_set(self):
        pt = lambda_curve(2, 1, +1, 0.6)
        S = build(pt.matrix())
        period = 2 * np.pi * pt.q * np.sqrt(pt.b_plus)
        box = Rect(0.4, 0.4 + period, -2.1, 2.25)
        shifted = Rect(0.4 + period, 0.4 + 2 * period, -2.1, 2.25)
        rng = np.random.default_rng(62)
        assert winding_count(S, box, rng=rng) == winding_count(S, shifted, rng=rng)

    def test_roots_collapse_toward_degenerate_corner(self):
        # along the ratio-2 curve toward the singular corner the three
        # w-roots collapse to 1 and the spectrum concentrates on [0, inf):
        # the smallest conjugate pair approaches the origin and all
        # imaginary parts shrink
        spreads, pair_mags, im_spans = [], [], []
        for a in (-0.8, -0.95, -0.99, -0.999):
            pt = lambda_curve(2, 1, +1, a)
            spreads.append(np.max(np.abs(np.roots(build_g(pt).coeffs) - 1.0)))
            vals = cheb_spectrum(pt, 4).values()
            nonreal = vals[np.abs(vals.imag) > 1e-11]
            pair_mags.append(np.min(np.abs(nonreal)))
            window = vals[np.abs(vals) < 50]
            im_spans.append(np.max(np.abs(window.imag)))
        assert all(x > y for x, y in zip(spreads, spreads[1:]))
        assert all(x > y for x, y in zip(pair_mags, pair_mags[1:]))
        assert all(x > y for x, y in zip(im_spans, im_spans[1:]))
        assert pair_mags[-1] < 0.05 and im_spans[-1] < 0.2
