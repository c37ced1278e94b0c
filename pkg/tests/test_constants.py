import math

import numpy as np
import pytest

from umaxpoly import (
    KernelKind,
    asymptotic_constant,
    ball_volume,
    form_eigenvalues,
    inverse_transform,
    limit_cdf,
    limit_constant,
    limit_law,
    limit_quantile,
    normalize_stat,
    quadratic_form_matrix,
    sine_product,
)

TWO_PI = 2.0 * math.pi


class TestLimitConstant:
    def test_triangle_perimeter_constant_is_9_pi_half(self):
        # matches the inscribed-triangle law 1 - exp(-2t/(9 pi))
        assert limit_constant(KernelKind.INSCRIBED_PERIMETER, 3) == pytest.approx(4.5 * math.pi, rel=1e-14)

    def test_triangle_area_constant_equals_perimeter_constant(self):
        assert limit_constant(KernelKind.INSCRIBED_AREA, 3) == pytest.approx(4.5 * math.pi, rel=1e-13)

    def test_circumscribed_triangle_constants(self):
        assert limit_constant(KernelKind.CIRCUMSCRIBED_PERIMETER, 3) == pytest.approx(72.0 * math.pi, rel=1e-13)
        assert limit_constant(KernelKind.CIRCUMSCRIBED_AREA, 3) == pytest.approx(36.0 * math.pi, rel=1e-13)

    def test_tail_ratio_anchor(self):
        ratio = math.factorial(3) / limit_constant(KernelKind.INSCRIBED_PERIMETER, 3)
        assert ratio == pytest.approx(4.0 / (3.0 * math.pi), rel=1e-12)

    @pytest.mark.parametrize("m", list(range(3, 101)))
    def test_area_perimeter_identity(self, m):
        k1 = limit_constant(KernelKind.INSCRIBED_PERIMETER, m)
        k2 = limit_constant(KernelKind.INSCRIBED_AREA, m)
        factor = (2.0 * math.cos(math.pi / m)) ** (0.5 * (m - 1))
        assert k2 == pytest.approx(factor * k1, rel=1e-12)

    @pytest.mark.parametrize("m", list(range(3, 101)))
    def test_circumscribed_identity(self, m):
        k3 = limit_constant(KernelKind.CIRCUMSCRIBED_PERIMETER, m)
        k4 = limit_constant(KernelKind.CIRCUMSCRIBED_AREA, m)
        assert k3 == pytest.approx(2.0 ** (0.5 * (m - 1)) * k4, rel=1e-12)

    @pytest.mark.parametrize("m", [29, 30, 31, 32, 50, 200])
    def test_log_domain_handoff_is_smooth(self, m):
        # direct and log-domain evaluations agree across the m = 30 switch
        beta = 0.5 * (m - 1)
        base = math.pi * math.sin(math.pi / m)
        via_log = math.exp(1.5 * math.log(m) + beta * math.log(base) + math.lgamma(0.5 * (m + 1)))
        assert limit_constant(KernelKind.INSCRIBED_PERIMETER, m) == pytest.approx(via_log, rel=1e-12)
        if m <= 100:
            direct = m ** 1.5 * base ** beta * math.gamma(0.5 * (m + 1))
            assert limit_constant(KernelKind.INSCRIBED_PERIMETER, m) == pytest.approx(direct, rel=1e-12)

    def test_rejects_small_m(self):
        with pytest.raises(ValueError):
            limit_constant(KernelKind.INSCRIBED_PERIMETER, 2)


class TestAsymptoticConstant:
    def test_triangle_value(self):
        expected = math.pi ** 2.5 * 9.0 / (2.0 * math.exp(1.5))
        assert asymptotic_constant(KernelKind.INSCRIBED_PERIMETER, 3) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("m", [3, 5, 10, 30, 100])
    def test_area_to_perimeter_ratio(self, m):
        ratio = (asymptotic_constant(KernelKind.INSCRIBED_AREA, m)
                 / asymptotic_constant(KernelKind.INSCRIBED_PERIMETER, m))
        assert ratio == pytest.approx(2.0 ** (0.5 * (m - 1)), rel=1e-12)

    def test_pairings(self):
        for m in (4, 7, 20):
            assert asymptotic_constant(KernelKind.INSCRIBED_PERIMETER, m) == pytest.approx(
                asymptotic_constant(KernelKind.CIRCUMSCRIBED_AREA, m), rel=1e-14)
            assert asymptotic_constant(KernelKind.INSCRIBED_AREA, m) == pytest.approx(
                asymptotic_constant(KernelKind.CIRCUMSCRIBED_PERIMETER, m), rel=1e-14)

    def test_ratio_to_exact_constant_approaches_one(self):
        for kind in KernelKind:
            ratio = limit_constant(kind, 100) / asymptotic_constant(kind, 100)
            assert 0.9 < ratio < 1.1


class TestSpectrum:
    def test_m3(self):
        np.testing.assert_allclose(form_eigenvalues(3), [0.5, 1.5], atol=1e-15)

    def test_m4(self):
        expected = [1.0 - math.sqrt(2) / 2, 1.0, 1.0 + math.sqrt(2) / 2]
        np.testing.assert_allclose(form_eigenvalues(4), expected, atol=1e-15)

    @pytest.mark.parametrize("m", list(range(3, 21)))
    def test_against_dense_eigensolver(self, m):
        numeric = np.linalg.eigvalsh(quadratic_form_matrix(m))
        assert np.max(np.abs(numeric - form_eigenvalues(m))) <= 1e-10

    def test_all_in_open_interval(self):
        for m in (3, 10, 50):
            lam = form_eigenvalues(m)
            assert np.all(lam > 0.0) and np.all(lam < 2.0)
            assert np.all(np.diff(lam) > 0.0)


class TestSineProduct:
    @pytest.mark.parametrize("m,expected", [
        (2, math.sqrt(2) / 2),
        (3, math.sqrt(3) / 4),
        (4, 0.25),
    ])
    def test_small_cases(self, m, expected):
        assert sine_product(m) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("m", list(range(2, 51)))
    def test_matches_direct_product(self, m):
        direct = float(np.prod(np.sin(np.pi * np.arange(1, m) / (2.0 * m))))
        assert sine_product(m) == pytest.approx(direct, rel=1e-12)

    def test_rejects_m1(self):
        with pytest.raises(ValueError):
            sine_product(1)


class TestBallVolume:
    @pytest.mark.parametrize("d,expected", [(0, 1.0), (1, 2.0), (2, math.pi), (3, 4.0 * math.pi / 3.0)])
    def test_known_volumes(self, d, expected):
        assert ball_volume(d) == pytest.approx(expected, rel=1e-14)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            ball_volume(-1)


class TestVolumeChain:
    @pytest.mark.parametrize("m", list(range(3, 11)))
    def test_ellipsoid_volume_reproduces_tail_coefficient(self, m):
        # volume of the small ellipsoid (ball times semi-axis product) against
        # the closed-form tail coefficient, at s = 1
        s = 1.0
        lam = form_eigenvalues(m)
        left = ball_volume(m - 1) * float(np.prod(np.sqrt(2.0 * s / (math.sin(math.pi / m) * lam))))
        right = ((TWO_PI) ** (m - 1) / math.factorial(m - 1)
                 * s ** (0.5 * (m - 1)) * math.factorial(m)
                 / limit_constant(KernelKind.INSCRIBED_PERIMETER, m))
        assert left == pytest.approx(right, rel=1e-10)


class TestLimitCdf:
    def test_zero_at_origin_and_below(self):
        law = limit_law(KernelKind.INSCRIBED_PERIMETER, 3)
        assert limit_cdf(law, 0.0) == 0.0
        assert limit_cdf(law, -5.0) == 0.0

    def test_value_at_t_equal_constant(self):
        law = limit_law(KernelKind.INSCRIBED_PERIMETER, 3)
        assert limit_cdf(law, law.constant) == pytest.approx(1.0 - math.exp(-1.0), rel=1e-14)

    @pytest.mark.parametrize("t", [1.0, 5.0, 20.0])
    def test_matches_triangle_closed_form(self, t):
        law = limit_law(KernelKind.INSCRIBED_PERIMETER, 3)
        assert limit_cdf(law, t) == pytest.approx(1.0 - math.exp(-2.0 * t / (9.0 * math.pi)), abs=1e-14)

    def test_monotone_and_limits(self):
        law = limit_law(KernelKind.INSCRIBED_AREA, 5)
        ts = np.linspace(0.0, 200.0, 500)
        vals = limit_cdf(law, ts)
        assert np.all(np.diff(vals) >= 0.0)
        assert limit_cdf(law, 1e9) == pytest.approx(1.0, abs=1e-12)

    def test_scale_family(self):
        law = limit_law(KernelKind.CIRCUMSCRIBED_PERIMETER, 4)
        beta = law.weibull_exponent
        for x in (0.3, 1.0, 2.7):
            t = law.constant ** (1.0 / beta) * x
            assert limit_cdf(law, t) == pytest.approx(1.0 - math.exp(-x ** beta), rel=1e-12)

    def test_quantile_inverts_cdf(self):
        law = limit_law(KernelKind.INSCRIBED_PERIMETER, 4)
        for u in (0.01, 0.5, 0.99):
            assert limit_cdf(law, limit_quantile(law, u)) == pytest.approx(u, rel=1e-12)


class TestNormalization:
    def test_raw_at_extremal_value_maps_to_zero(self):
        for kind in KernelKind:
            law = limit_law(kind, 4)
            assert normalize_stat(law, 17, law.extremal_value) == 0.0

    def test_triangle_scaling_is_cubic(self):
        law = limit_law(KernelKind.INSCRIBED_PERIMETER, 3)
        raw = law.extremal_value - 1e-3
        assert normalize_stat(law, 10, raw) == pytest.approx(1.0, rel=1e-12)

    def test_round_trip(self):
        law = limit_law(KernelKind.INSCRIBED_AREA, 5)
        t = 2.5
        z = inverse_transform(law, 40, t)
        assert normalize_stat(law, 40, z) == pytest.approx(t, rel=1e-12)

    def test_round_trip_all_kinds(self):
        # The recovered t inherits the rounding of z, which scales with the
        # extremal value; a slightly looser tolerance covers every kind.
        for kind in KernelKind:
            for m, n, t in ((3, 10, 1.5), (4, 25, 0.7), (5, 40, 2.5)):
                law = limit_law(kind, m)
                z = inverse_transform(law, n, t)
                assert normalize_stat(law, n, z) == pytest.approx(t, rel=1e-11)

    def test_min_kinds_flip_sign(self):
        law = limit_law(KernelKind.CIRCUMSCRIBED_PERIMETER, 3)
        raw = law.extremal_value + 2e-3
        assert normalize_stat(law, 10, raw) == pytest.approx(2.0, rel=1e-12)
        assert inverse_transform(law, 10, 2.0) == pytest.approx(raw, rel=1e-15)

    def test_rejects_n_below_m(self):
        law = limit_law(KernelKind.INSCRIBED_PERIMETER, 5)
        with pytest.raises(ValueError):
            normalize_stat(law, 4, 1.0)
        with pytest.raises(ValueError):
            inverse_transform(law, 4, 1.0)


class TestLimitLawValidation:
    def test_factory_fields(self):
        law = limit_law(KernelKind.INSCRIBED_PERIMETER, 7)
        assert law.weibull_exponent == 3.0
        assert law.scaling_exponent == 2.0 * 7 / 6
        assert law.constant > 0.0

    def test_rejects_inconsistent_fields(self):
        from umaxpoly import LimitLaw, Orientation

        with pytest.raises(ValueError):
            LimitLaw(kind=KernelKind.INSCRIBED_PERIMETER, m=3, extremal_value=1.0,
                     weibull_exponent=2.0, constant=1.0, scaling_exponent=3.0,
                     orientation=Orientation.MAX)
