"""Moment matrices in phase normal form, LDU biorthogonalization, and the
degree-filtered Gram analysis.

The raw-moment oracle below integrates the defining complex-plane integral
directly (trapezoid in the angle, which converges geometrically for periodic
analytic integrands, panelled Gauss-Legendre radially) using plain float
arithmetic. It shares no code with the certified route and pins down both
the unitary gauge and the phase-twist convention of the stored entries.
"""

import numpy as np
import pytest
from mpmath import mp, mpf, mpc

from oscpos.biorthogonal import (
    DegenerateFiltration,
    MomentMatrix,
    biorthogonalize,
    full_gram,
    leading_minors,
    moment_entry,
    moment_matrix,
    normalize_coupling,
    twisted_det,
)
from oscpos.precision_numerics import PrecisionValue, SignCertificate


def raw_moment_oracle(d, p, k, l, tau, psi):
    """Float-precision value of the defining integral of moment (k, l)."""
    R, npan, deg, m = 6.5, 26, 40, 4096
    x, w = np.polynomial.legendre.leggauss(deg)
    rs, ws = [], []
    for i in range(npan):
        a, b = R * i / npan, R * (i + 1) / npan
        rs.append((x + 1) * (b - a) / 2 + a)
        ws.append(w * (b - a) / 2)
    r = np.concatenate(rs)
    wr = np.concatenate(ws)
    theta = 2 * np.pi * np.arange(m) / m
    phase = (d * (k - l) * theta[None, :]
             + 2 * tau * (r ** d)[:, None] * np.cos(d * theta[None, :] + psi))
    ang = np.exp(1j * phase).mean(axis=1) * 2 * np.pi
    integrand = r ** (d * (k + l) + 2 * p + 1) * np.exp(-r ** 2) * ang
    return complex(np.sum(integrand * wr))


class TestNormalizeCoupling:
    def test_positive_real_passthrough(self):
        tau, psi = normalize_coupling(mpf("1.5"))
        assert tau == mpf("1.5") and psi == 0

    def test_negative_real_gets_half_turn(self):
        tau, psi = normalize_coupling(-2.0)
        assert tau == 2
        with mp.workdps(30):
            assert abs(psi - mp.pi) < mpf("1e-14")

    def test_complex_polar_split(self):
        tau, psi = normalize_coupling(mpc(1, 1))
        with mp.workdps(30):
            assert abs(tau - mp.sqrt(2)) < mpf("1e-14")
            assert abs(psi - mp.pi / 4) < mpf("1e-14")


class TestMomentEntries:
    def test_rejects_weight_outside_range(self):
        with pytest.raises(ValueError):
            moment_entry(3, 3, 0, 0, mpf(1))

    def test_diagonal_at_zero_coupling(self):
        for k in (0, 1, 2):
            v = moment_entry(3, 1, k, k, mpf(0), tol=mpf("1e-25"))
            with mp.workdps(60):
                ref = mp.pi * mp.gamma(1 + 3 * k + 1)
                gap = abs(v.value - ref)
            assert gap <= v.err

    def test_frozen_off_diagonal(self):
        v = moment_entry(3, 0, 1, 0, mpf("0.5"), tol=mpf("1e-25"))
        with mp.workdps(40):
            ref = mpf("-0.776568312649593059")
            gap = abs(v.value - ref)
        assert gap <= v.err + mpf("1e-17")

    @pytest.mark.parametrize("psi", [0.0, 0.7])
    def test_raw_integral_oracle_fixes_gauge_and_twist(self, psi):
        # stored normal form relates to the raw complex moment through the
        # diagonal unitary i^k: raw_{k,l} = i^{l-k} e^{-i psi (k-l)} I_{k,l}
        t = mp.exp(mpc(0, psi)) if psi else mpf(1)
        M = moment_matrix(3, 0, 2, t, tol=mpf("1e-20"))
        rot = M.rotated_entries()
        for k, l in ((0, 0), (1, 0), (0, 1), (1, 1)):
            raw = raw_moment_oracle(3, 0, k, l, 1.0, psi)
            with mp.workdps(40):
                val = rot[k][l].value if hasattr(rot[k][l], "value") else rot[k][l]
                predicted = mpc(0, 1) ** (l - k) * val
                gap = abs(predicted - mpc(raw.real, raw.imag))
            assert gap < mpf("1e-8"), (k, l, psi)

    def test_antisymmetry_of_normal_form(self):
        M = moment_matrix(3, 1, 3, mpf("0.8"), tol=mpf("1e-22"))
        for k in range(3):
            for l in range(k + 1, 3):
                a = M.entry(k, l)
                b = M.entry(l, k)
                expect = (mp.fneg(a.value, exact=True) if (l - k) % 2
                          else a.value)
                assert b.value == expect

    def test_hermitian_residual_is_small(self):
        M = moment_matrix(3, 0, 3, mpf(1), tol=mpf("1e-25"))
        assert M.hermitian_residual <= mpf("1e-20")


class TestDeterminantConventions:
    def test_plain_minors_positive_at_zero_coupling(self):
        M = moment_matrix(3, 0, 4, mpf(0), tol=mpf("1e-25"))
        for vd in leading_minors(M):
            assert vd.sign is SignCertificate.POSITIVE

    def test_alternating_convention_sign_pattern(self):
        # scaling column l by (-1)^l flips the determinant sign exactly when
        # the order is 2 or 3 mod 4
        M = moment_matrix(3, 0, 5, mpf("0.5"), tol=mpf("1e-25"))
        for m in range(1, 6):
            vd = twisted_det(M, m)
            expect_negative = m % 4 in (2, 3)
            expected = (SignCertificate.NEGATIVE if expect_negative
                        else SignCertificate.POSITIVE)
            assert vd.sign is expected, m


class TestBiorthogonalize:
    def test_graded_norms_at_zero_coupling(self):
        M = moment_matrix(3, 0, 3, mpf(0), tol=mpf("1e-25"))
        sysm = biorthogonalize(M)
        with mp.workdps(60):
            for k, h in enumerate(sysm.h):
                ref = mp.pi * mp.gamma(3 * k + 1)
                gap = abs(h.value - ref)
                assert gap <= h.err
        assert sysm.residual <= mpf("1e-20")

    def test_pairing_residual_at_nonzero_coupling(self):
        M = moment_matrix(3, 2, 3, mpf("1.3"), tol=mpf("1e-25"))
        sysm = biorthogonalize(M)
        assert sysm.residual <= mpf("1e-20")
        for h in sysm.h:
            assert h.sign_certificate() is SignCertificate.POSITIVE

    def test_degenerate_filtration_raises(self):
        one = PrecisionValue.exact(1)
        M = MomentMatrix(d=3, p=0, size=2, tau=mpf(1), psi=mpf(0),
                         entries=((one, one), (one, one)),
                         hermitian_residual=mpf(0))
        with pytest.raises(DegenerateFiltration) as exc:
            biorthogonalize(M)
        assert exc.value.index == 1


class TestFullGram:
    def test_small_degree_filtration(self):
        rep = full_gram(3, 4, mpf(1), tol=mpf("1e-25"))
        assert rep.nondegenerate
        assert rep.block_sizes == (2, 2, 1)
        assert len(rep.degree_minors) == 5
        for vd in rep.degree_minors:
            assert vd.sign is SignCertificate.POSITIVE
        assert rep.block_factor_discrepancy <= mpf("1e-18")
        for sysm in rep.systems:
            assert sysm is not None
            assert sysm.residual <= mpf("1e-20")
