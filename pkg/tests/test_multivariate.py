"""Multivariate oscillatory integrals: direct Monte Carlo, sphere reduction
through the radial kernel table, separable closed forms, scaling identity,
and the seeded evidence sweep.

Monte Carlo results here are deterministic functions of (samples, seed), so
equality assertions on reruns are exact, not statistical.
"""

import pytest
from mpmath import mp, mpf

from oscpos.multivariate import (
    Density,
    HomogeneousPoly,
    SweepConfig,
    evidence_sweep,
    i_direct_mc,
    i_separable,
    i_sphere_reduced,
    scaling_check,
)


class TestHomogeneousPoly:
    def test_rejects_wrong_total_degree(self):
        with pytest.raises(ValueError):
            HomogeneousPoly.from_terms(2, 3, {(1, 1): 1.0})

    def test_rejects_duplicate_monomials(self):
        with pytest.raises(ValueError):
            HomogeneousPoly(2, 2, (((2, 0), 1.0), ((2, 0), 2.0)))

    def test_separable_layout(self):
        W = HomogeneousPoly.separable([1.0, -2.0], 3)
        assert W.n == 2 and W.degree == 3
        assert dict(W.monomials) == {(3, 0): 1.0, (0, 3): -2.0}

    def test_random_reproducible(self):
        a = HomogeneousPoly.random(3, 3, seed=9)
        b = HomogeneousPoly.random(3, 3, seed=9)
        c = HomogeneousPoly.random(3, 3, seed=10)
        assert a.monomials == b.monomials
        assert a.monomials != c.monomials

    def test_eval_single_point(self):
        W = HomogeneousPoly.from_terms(2, 2, {(2, 0): 1.0, (1, 1): 2.0})
        z = (1 + 1j, 2 - 1j)
        assert W.eval(z) == pytest.approx((1 + 1j) ** 2 + 2 * (1 + 1j) * (2 - 1j))

    def test_coeff_l1(self):
        W = HomogeneousPoly.from_terms(2, 2, {(2, 0): 3.0, (0, 2): -4.0})
        assert W.coeff_l1 == pytest.approx(7.0)


class TestDensity:
    def test_trivial_density(self):
        rho = Density.one()
        assert rho.ell == 0

    def test_squared_modulus_density_degree(self):
        P = HomogeneousPoly.from_terms(2, 2, {(1, 1): 1.0})
        assert Density.abs2(P).ell == 2


class TestDirectMonteCarlo:
    def test_zero_phase_integrates_to_pi_power(self):
        # with W = 0 the oscillation is absent and every draw contributes
        # exactly 1, so the estimate equals pi^n with zero variance
        W = HomogeneousPoly.separable([0.0, 0.0], 3)
        est = i_direct_mc(W, Density.one(), samples=2000, seed=1)
        with mp.workdps(30):
            assert abs(est.value - float(mp.pi ** 2)) < 1e-12
        assert est.stderr == 0.0

    def test_bit_identical_reruns(self):
        W = HomogeneousPoly.random(2, 3, seed=4)
        a = i_direct_mc(W, Density.one(), samples=150000, seed=8)
        b = i_direct_mc(W, Density.one(), samples=150000, seed=8)
        assert a.value == b.value and a.stderr == b.stderr
        c = i_direct_mc(W, Density.one(), samples=150000, seed=9)
        assert a.value != c.value

    def test_rejects_tiny_sample_budget(self):
        W = HomogeneousPoly.random(2, 3, seed=4)
        with pytest.raises(ValueError):
            i_direct_mc(W, Density.one(), samples=10, seed=0)

    def test_separable_closed_form_agreement(self):
        coeffs = [1.0, 1.0]
        W = HomogeneousPoly.separable(coeffs, 3)
        est = i_direct_mc(W, Density.one(), samples=400000, seed=3)
        closed = i_separable(coeffs, 3)
        assert abs(est.value - float(closed.value)) <= 4 * est.stderr


class TestSphereReduction:
    def test_zero_phase_calibration(self):
        W = HomogeneousPoly.separable([0.0, 0.0], 3)
        est = i_sphere_reduced(W, Density.one(), samples=4000, seed=2)
        with mp.workdps(30):
            gap = abs(est.value - float(mp.pi ** 2))
        assert gap <= 3 * est.stderr + est.kernel_err + 1e-9

    def test_routes_consistent(self):
        W = HomogeneousPoly.random(2, 3, seed=12)
        a = i_direct_mc(W, Density.one(), samples=300000, seed=30)
        b = i_sphere_reduced(W, Density.one(), samples=300000, seed=31)
        assert a.consistent_with(b)

    def test_proven_regime_flag(self):
        W = HomogeneousPoly.random(2, 3, seed=12)
        within = i_sphere_reduced(W, Density.one(), samples=2000, seed=0)
        assert not within.exploratory
        P = HomogeneousPoly.from_terms(2, 2, {(1, 1): 1.0})
        beyond = i_sphere_reduced(W, Density.abs2(P), samples=2000, seed=0)
        assert beyond.exploratory


class TestSeparableClosedForm:
    def test_frozen_values(self):
        v = i_separable([1, 1], 3, tol=mpf("1e-30"))
        with mp.workdps(40):
            ref = mpf("2.469361104445295284687296")
            gap = abs(v.value - ref)
        assert gap <= v.err + mpf("1e-24")

    def test_factorizes_over_coordinates(self):
        a = i_separable([0.7], 3)
        b = i_separable([1.3], 3)
        c = i_separable([0.7, 1.3], 3)
        with mp.workdps(40):
            gap = abs(a.value * b.value - c.value)
        assert gap <= mpf("1e-20")

    def test_complex_coefficient_uses_modulus(self):
        v = i_separable([1j], 3)
        w = i_separable([1.0], 3)
        with mp.workdps(40):
            gap = abs(v.value - w.value)
        assert gap <= v.err + w.err


class TestScalingIdentity:
    def test_fixed_point_is_bit_exact(self):
        W = HomogeneousPoly.random(2, 3, seed=6)
        rep = scaling_check(W, 1.0, samples=20000, seed=7)
        assert rep.gap == 0.0

    def test_nontrivial_scale_consistent(self):
        W = HomogeneousPoly.random(2, 3, seed=6)
        rep = scaling_check(W, 1.3, samples=200000, seed=7)
        assert rep.consistent

    def test_scale_domain_enforced(self):
        W = HomogeneousPoly.random(2, 3, seed=6)
        with pytest.raises(ValueError):
            scaling_check(W, 3.0, samples=1000, seed=0)


class TestEvidenceSweep:
    def test_small_family_all_positive(self):
        family = [HomogeneousPoly.random(2, 3, seed=s) for s in (100, 101)]
        entries = evidence_sweep(
            family, config=SweepConfig(samples=60000, seed=5))
        assert len(entries) == 2
        for e in entries:
            assert e.verdict == "Positive"
            assert e.regime == "proven"
            assert e.rerun is None

    def test_sweep_deterministic(self):
        family = [HomogeneousPoly.random(2, 3, seed=55)]
        a = evidence_sweep(family, config=SweepConfig(samples=40000, seed=1))
        b = evidence_sweep(family, config=SweepConfig(samples=40000, seed=1))
        assert a[0].estimate.value == b[0].estimate.value
