"""Determinant-based positivity criteria: grids, alternating Wronskians,
scans with escalation, positive-definiteness checks, exterior-power audit.
"""

import pytest
from mpmath import mp, mpf, mpc

from oscpos.fp_kernel import FpParams, fp_series
from oscpos.positivity_lab import (
    GridSpec,
    HermitianViolation,
    InsufficientDerivatives,
    bochner_pd_check,
    cauchy_binet_check,
    hankel_scan,
    tp_grid_det,
    wronskian_delta,
)
from oscpos.precision_numerics import (
    NonConvergence,
    PrecisionValue,
    SignCertificate,
    precision_cap,
    set_precision_cap,
)


@pytest.fixture
def restore_cap():
    old = precision_cap()
    yield
    set_precision_cap(old)


class TestGridSpec:
    def test_rejects_mismatched_lengths(self):
        with pytest.raises(ValueError):
            GridSpec((0.0, 1.0), (0.0,))

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            GridSpec((1.0, 0.0), (0.0, 1.0))

    def test_random_is_reproducible_and_separated(self):
        a = GridSpec.random(5, seed=3)
        b = GridSpec.random(5, seed=3)
        assert a.xs == b.xs and a.ys == b.ys
        assert all(y - x >= 1e-2 for x, y in zip(a.xs, a.xs[1:]))

    def test_random_different_seeds_differ(self):
        assert GridSpec.random(4, seed=1).xs != GridSpec.random(4, seed=2).xs


class TestGridDeterminant:
    def test_gaussian_two_by_two(self):
        # [e^{-(x_i-y_j)^2}] on {0,1}x{0,1} has determinant 1 - e^{-2}
        f = lambda x: mp.exp(-mpf(x) ** 2)
        vd = tp_grid_det(f, GridSpec((0.0, 1.0), (0.0, 1.0)))
        assert vd.sign is SignCertificate.POSITIVE
        with mp.workdps(40):
            ref = 1 - mp.exp(-2)
            gap = abs(vd.value.value - ref)
        assert gap <= vd.value.err + mpf("1e-12")

    def test_gaussian_larger_grid_positive(self):
        f = lambda x: mp.exp(-mpf(x) ** 2)
        vd = tp_grid_det(f, GridSpec.random(4, seed=11))
        assert vd.sign is SignCertificate.POSITIVE


class TestWronskian:
    def test_requires_enough_derivatives(self):
        with pytest.raises(InsufficientDerivatives):
            wronskian_delta([mpf(1), mpf(2)], 2)

    def test_order_one_is_the_value_itself(self):
        vd = wronskian_delta([PrecisionValue(mpf(-2), mpf("1e-10"))], 1)
        assert vd.sign is SignCertificate.NEGATIVE

    def test_sign_layout(self):
        # entries (k,l) = (-1)^l v[k+l]: for v = (1, -1, 2) the order 2
        # matrix is [[1, 1], [-1, -2]] with determinant -1
        vd = wronskian_delta([mpf(1), mpf(-1), mpf(2)], 2)
        assert vd.sign is SignCertificate.NEGATIVE
        with mp.workdps(30):
            assert abs(vd.value.value + 1) <= vd.value.err + mpf("1e-20")

    def test_exactly_singular_is_indeterminate(self):
        vd = wronskian_delta([mpf(1), mpf(1), mpf(1)], 2)
        assert vd.sign is SignCertificate.INDETERMINATE


class TestHankelScan:
    def test_positive_regime_small_scan(self):
        out = hankel_scan(FpParams(3, 1), 3, [mpf(-1), mpf(0), mpf(2)],
                          tol=mpf("1e-30"))
        assert len(out) == 9
        assert all(vd.sign is SignCertificate.POSITIVE for vd in out)

    def test_refinement_consistency(self):
        # growing N only appends verdicts, it does not change earlier ones
        params = FpParams(3, 0)
        small = hankel_scan(params, 2, [mpf("0.5")], tol=mpf("1e-30"))
        large = hankel_scan(params, 3, [mpf("0.5")], tol=mpf("1e-30"))
        for a, b in zip(small, large):
            assert a.sign == b.sign
            assert a.context == b.context

    def test_negative_outside_positivity_regime(self):
        # p = d at strong coupling: the kernel itself is certified negative,
        # so the order 1 determinant must come back Negative
        out = hankel_scan(FpParams(3, 3), 1, [mpf("4.7")], tol=mpf("1e-25"))
        assert out[0].sign is SignCertificate.NEGATIVE

    def test_low_cap_raises_from_series(self, restore_cap):
        # deep negative u needs far more working digits than the cap allows
        set_precision_cap(40)
        with pytest.raises(NonConvergence):
            hankel_scan(FpParams(3, 0), 4, [mpf(-21)], tol=mpf("1e-30"))

    def test_unresolved_cell_reported_at_cap(self, restore_cap, monkeypatch):
        # if determinants refuse to resolve, the scan must surface an
        # Indeterminate verdict once escalation hits the cap
        import oscpos.positivity_lab as lab
        set_precision_cap(40)
        monkeypatch.setattr(
            lab, "wronskian_delta",
            lambda derivs, N: lab.PositivityVerdict(
                PrecisionValue(mpf(0), mpf(1)),
                SignCertificate.INDETERMINATE, "forced"))
        out = lab.hankel_scan(FpParams(3, 0), 2, [mpf(0)], tol=mpf("1e-30"))
        assert out[-1].sign is SignCertificate.INDETERMINATE
        assert "unresolved at precision cap" in out[-1].context


class TestBochner:
    def test_gaussian_characteristic_function_is_pd(self):
        phi = lambda u: mp.exp(-mpf(u) ** 2 / 4)
        vd = bochner_pd_check(phi, [mpf(x) for x in (-1.5, -0.2, 0.9, 2.0)])
        assert vd.sign is SignCertificate.POSITIVE

    def test_rejects_duplicate_points(self):
        phi = lambda u: mp.exp(-mpf(u) ** 2)
        with pytest.raises(ValueError):
            bochner_pd_check(phi, [mpf(1), mpf(1)])

    def test_non_hermitian_symbol_rejected(self):
        # an odd real symbol cannot be a characteristic function sample
        phi = lambda u: mpf(u)
        with pytest.raises(HermitianViolation):
            bochner_pd_check(phi, [mpf(0), mpf(1)])

    def test_indefinite_symbol_detected(self):
        # cos(3u) alone is the symbol of a two-atom measure; adding a large
        # negative constant breaks positive definiteness
        phi = lambda u: mp.cos(3 * mpf(u)) - (mpf(0) if u == 0 else mpf("0.8"))
        vd = bochner_pd_check(phi, [mpf(0), mpf("0.7"), mpf("1.9")])
        assert vd.sign is SignCertificate.NEGATIVE


class TestCauchyBinet:
    def test_explicit_pair(self):
        A = [[1, 2, 0], [0, 1, 1], [3, 0, 2]]
        B = [[2, 1, 0], [1, 0, 2], [0, 1, 1]]
        assert cauchy_binet_check(A=A, B=B, k=2)

    def test_seeded_rectangular_trials(self):
        assert cauchy_binet_check(trials=5, seed=21, shape=(3, 5, 3), k=2)

    def test_order_one_reduces_to_matrix_product(self):
        A = [[2, -1], [1, 3]]
        B = [[1, 4], [0, -2]]
        assert cauchy_binet_check(A=A, B=B, k=1)
