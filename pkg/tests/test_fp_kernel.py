"""Kernel family: series route, quadrature route, Fourier side.

The two evaluation routes are algorithmically independent (alternating
Gamma-ratio series versus Bessel quadrature), so their agreement within
combined certified error is the main internal consistency check. A few
values are frozen from an independent high precision evaluation.
"""

import math

import pytest
from mpmath import mp, mpf, mpc

from oscpos.fp_kernel import (
    FpParams,
    fp_asymptotic,
    fp_float,
    fp_quadrature,
    fp_series,
    fp_u_derivatives,
    gp_eval,
    hankel_gaussian_transform,
    hp_partial,
    series_term,
)
from oscpos.precision_numerics import PoleError, SignCertificate


class TestParams:
    def test_rejects_p_at_or_above_d(self):
        FpParams(3, 2)
        FpParams(3, 3)  # boundary index is allowed, kernel loses positivity
        with pytest.raises(ValueError):
            FpParams(0, 0)
        with pytest.raises(ValueError):
            FpParams(3, -1)


class TestSeriesTerms:
    def test_divisible_index_gives_exact_zero(self):
        # reciprocal Gamma kills every index with d | (k + p + 1)
        for d, p in ((3, 0), (4, 1), (5, 3)):
            k = d - p - 1
            term = series_term(FpParams(d, p), k)
            assert term.coefficient.value == 0
            assert term.coefficient.err == 0

    def test_reflection_matches_direct_ratio(self):
        params = FpParams(3, 1)
        term = series_term(params, 2, precision=30)
        with mp.workdps(60):
            x = mpf(2 + 1 + 1) / 3
            ref = mp.gamma(x) / (mp.factorial(2) * mp.gamma(1 - x)) / 3 ** 2
            gap = abs(term.coefficient.value - ref)
        assert gap <= term.coefficient.err

    def test_exponent_ladder(self):
        from fractions import Fraction
        params = FpParams(4, 2)
        for k in (0, 1, 5):
            term = series_term(params, k)
            assert term.exponent == Fraction(k + 3, 4)


class TestDualRoutes:
    def test_frozen_reference_point(self):
        v = fp_series(FpParams(3, 0), mpf(1), tol=mpf("1e-30"))
        with mp.workdps(50):
            ref = mpf("0.1667328501734795397672817842977891774646")
            gap = abs(v.value - ref)
        assert gap <= v.err + mpf("1e-38")

    @pytest.mark.parametrize("d,p,t", [
        (3, 0, "0.3"), (3, 2, "1.7"), (4, 1, "0.9"), (5, 4, "4.0"),
    ])
    def test_routes_agree_within_certified_error(self, d, p, t):
        params = FpParams(d, p)
        s = fp_series(params, mpf(t), tol=mpf("1e-20"))
        q = fp_quadrature(params, mpf(t), tol=mpf("1e-20"))
        with mp.workdps(60):
            gap = abs(s.value - q.value)
        assert gap <= s.err + q.err

    def test_value_at_zero_coupling(self):
        # quadrature route handles t = 0 and must hit Gamma(p+1)/d
        for d, p in ((3, 0), (4, 2), (5, 5)):
            v = fp_quadrature(FpParams(d, p), mpf(0), tol=mpf("1e-30"))
            with mp.workdps(60):
                ref = mp.gamma(p + 1) / d
                gap = abs(v.value - ref)
            assert gap <= v.err

    def test_tighter_tolerance_stays_inside_looser_bound(self):
        params = FpParams(3, 1)
        loose = fp_series(params, mpf("0.8"), tol=mpf("1e-12"))
        tight = fp_series(params, mpf("0.8"), tol=mpf("1e-28"))
        with mp.workdps(45):
            gap = abs(loose.value - tight.value)
        assert gap <= loose.err
        assert tight.err < loose.err

    def test_kernel_goes_negative_at_boundary_weight(self):
        # p = d is outside the positivity regime: certified sign flip
        v = fp_series(FpParams(3, 3), mpf(10), tol=mpf("1e-20"))
        assert v.sign_certificate() is SignCertificate.NEGATIVE


class TestUDerivatives:
    def test_zeroth_matches_series_evaluation(self):
        params = FpParams(3, 2)
        u = mpf("0.6")
        derivs = fp_u_derivatives(params, u, 0, tol=mpf("1e-25"))
        with mp.workdps(60):
            t = mp.exp(u / 2)
            direct = fp_series(params, t, tol=mpf("1e-25"))
            gap = abs(derivs[0].value - direct.value)
        assert gap <= derivs[0].err + direct.err

    def test_first_derivative_against_central_difference(self):
        params = FpParams(3, 0)
        u = mpf("-0.4")
        derivs = fp_u_derivatives(params, u, 1, tol=mpf("1e-30"))
        h = mpf("1e-6")
        lo = fp_u_derivatives(params, u - h, 0, tol=mpf("1e-30"))[0]
        hi = fp_u_derivatives(params, u + h, 0, tol=mpf("1e-30"))[0]
        with mp.workdps(50):
            fd = (hi.value - lo.value) / (2 * h)
            gap = abs(derivs[1].value - fd)
        # h^2 truncation dominates the comparison
        assert gap < mpf("1e-10")

    def test_derivative_count(self):
        derivs = fp_u_derivatives(FpParams(4, 1), mpf(0), 4, tol=mpf("1e-20"))
        assert len(derivs) == 5


class TestAsymptotic:
    def test_leading_term_ratio_at_large_coupling(self):
        for d, p in ((3, 0), (3, 3)):
            params = FpParams(d, p)
            t = mpf(100)
            v = fp_series(params, t, tol=mpf("1e-20"))
            a = fp_asymptotic(params, t)
            ratio = v.value / a.value
            assert mpf("0.9") < ratio < mpf("1.1")

    def test_decays_with_coupling(self):
        params = FpParams(3, 0)
        a1 = abs(fp_asymptotic(params, mpf(10)).value)
        a2 = abs(fp_asymptotic(params, mpf(100)).value)
        assert a2 < a1


class TestFourierSide:
    def test_pole_at_zero_frequency(self):
        with pytest.raises(PoleError):
            gp_eval(FpParams(3, 0), mpf(0))

    def test_schwarz_reflection(self):
        params = FpParams(3, 2)
        a = gp_eval(params, mpf("1.3"))
        b = gp_eval(params, mpf("-1.3"))
        with mp.workdps(60):
            gap = abs(mp.conj(a.value) - b.value)
        assert gap <= a.err + b.err

    def test_product_form_at_zero_is_reciprocal_degree(self):
        for d, p in ((3, 0), (4, 2)):
            h = hp_partial(FpParams(d, p), mpf(0), M=500)
            with mp.workdps(60):
                gap = abs(h.value - mpf(1) / d)
            assert gap <= h.err

    def test_product_times_gamma_matches_ratio_form(self):
        # base weight: Gamma(is) H_0(s) equals G_0(s) up to the product tail
        params = FpParams(3, 0)
        s = mpf(1)
        h = hp_partial(params, s, M=100000, precision=30)
        g = gp_eval(params, s, precision=30)
        with mp.workdps(45):
            prod = mp.gamma(mpc(0, 1) * s) * h.value
        assert abs(prod - g.value) <= mpf("1e-5") + 10 * h.err

    def test_product_with_elementary_factor_general_weight(self):
        # higher weights need the factorial and harmonic-exponential factor
        d, p = 3, 2
        params = FpParams(d, p)
        s = mpf("0.7")
        h = hp_partial(params, s, M=100000, precision=30)
        g = gp_eval(params, s, precision=30)
        with mp.workdps(45):
            harm = sum(mpf(1) / j for j in range(1, p + 1))
            elem = mp.factorial(p) * mp.exp(mpc(0, -d * s * harm))
            prod = mp.gamma(mpc(0, 1) * s) * elem * h.value
        assert abs(prod - g.value) <= mpf("1e-5") + 10 * h.err

    def test_partial_product_error_shrinks_with_truncation(self):
        params = FpParams(3, 0)
        small = hp_partial(params, mpf(1), M=1000)
        large = hp_partial(params, mpf(1), M=100000)
        assert large.err < small.err


class TestRadialTransform:
    def test_zero_coupling_positive_order_vanishes_exactly(self):
        v, e = hankel_gaussian_transform(3, 7, 2, mpf(0), mpf("1e-20"))
        assert v == 0 and e == 0

    def test_zero_coupling_order_zero_gamma_moment(self):
        v, e = hankel_gaussian_transform(3, 5, 0, mpf(0), mpf("1e-30"))
        with mp.workdps(60):
            ref = mp.gamma(mpf(3)) / 2
        assert abs(v - ref) <= e

    def test_balanced_moment_vanishes(self):
        # r^3 e^{-r^2} J_0(2r) integrates to zero in closed form
        v, e = hankel_gaussian_transform(1, 3, 0, mpf(1), mpf("1e-25"))
        assert abs(v) <= e + mpf("1e-25")

    def test_singular_endpoint_error_claim_is_honest(self):
        # wpow - nu d/2 < 0 makes the contour integrand blow up at the
        # origin, the case where naive quadrature self-estimates mislead
        lo = hankel_gaussian_transform(3, 3, 1, mpf(2), mpf("1e-16"))
        hi = hankel_gaussian_transform(3, 3, 1, mpf(2), mpf("1e-32"))
        with mp.workdps(60):
            gap = abs(lo[0] - hi[0])
        assert gap <= lo[1] + hi[1]


class TestFloatFastPath:
    @pytest.mark.parametrize("t", [0.05, 0.4, 1.0, 3.0, 9.0])
    def test_matches_certified_route(self, t):
        params = FpParams(3, 1)
        ref = fp_series(params, mpf(t), tol=mpf("1e-25"))
        got = fp_float(params, t)
        assert abs(got - float(ref.value)) < 5e-13

    def test_zero_coupling(self):
        assert fp_float(FpParams(4, 2), 0.0) == pytest.approx(
            float(mp.gamma(3)) / 4, rel=1e-14)
