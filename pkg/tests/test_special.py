import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import ellipe as scipy_ellipe
from scipy.special import ellipkm1 as scipy_ellipkm1
from scipy.special import psi as scipy_psi

from np_revolve import (
    DomainError,
    azimuthal_moments0,
    azimuthal_moments_quad,
    digamma_seq,
    e_inversion_series,
    ellip_e_imag,
    ellip_k_imag,
    ellip_pair_imag,
    k_inversion_series,
)
from np_revolve.special import k_inversion_series_tail

from helpers import gauss_panels


def k_imag_quad(kappa, tol=1e-13):
    return quad(lambda t: (1 + kappa**2 * np.sin(t) ** 2) ** -0.5, 0, np.pi / 2,
                epsabs=tol, epsrel=tol, limit=500)[0]


def e_imag_quad(kappa, tol=1e-13):
    return quad(lambda t: (1 + kappa**2 * np.sin(t) ** 2) ** 0.5, 0, np.pi / 2,
                epsabs=tol, epsrel=tol, limit=500)[0]


class TestEllipticImag:
    def test_zero_argument_is_pi_over_2(self):
        assert ellip_k_imag(0.0) == pytest.approx(np.pi / 2, abs=0)
        assert ellip_e_imag(0.0) == pytest.approx(np.pi / 2, abs=0)

    @pytest.mark.parametrize("kappa", [0.1, 1.0, 3.7, 25.0])
    def test_matches_quadrature(self, kappa):
        assert ellip_k_imag(kappa) == pytest.approx(k_imag_quad(kappa), rel=1e-12)
        assert ellip_e_imag(kappa) == pytest.approx(e_imag_quad(kappa), rel=1e-12)

    def test_transformation_consistency_against_scipy(self):
        # K(i k) = K(m)/sqrt(1+k^2) with m = k^2/(1+k^2); scipy evaluates the
        # standard-modulus side by an independent (Cephes) implementation.
        for kappa in np.linspace(0.0, 100.0, 41):
            kp2 = 1.0 / (1.0 + kappa**2)
            ref_k = scipy_ellipkm1(kp2) * math.sqrt(kp2)
            ref_e = scipy_ellipe(kappa**2 * kp2) / math.sqrt(kp2)
            assert ellip_k_imag(kappa) == pytest.approx(ref_k, rel=1e-12)
            assert ellip_e_imag(kappa) == pytest.approx(ref_e, rel=1e-12)

    def test_log_growth_at_large_argument(self):
        # K(i kappa) ~ log(kappa)/kappa, so the difference stays bounded
        for kappa in np.logspace(1, 4, 13):
            assert abs(kappa * ellip_k_imag(kappa) - math.log(kappa)) < 1.5

    def test_derivative_identity_second_kind(self):
        # E(ik) = (1+k^2) (K(ik) + k dK(ik)/dk), by the z-plane identity
        # E = (1-z^2) K + z (1-z^2) K' restricted to z = i k
        for kappa in (0.3, 1.0, 3.0):
            h = 1e-6 * kappa
            dk = (ellip_k_imag(kappa + h) - ellip_k_imag(kappa - h)) / (2 * h)
            rhs = (1 + kappa**2) * (ellip_k_imag(kappa) + kappa * dk)
            assert ellip_e_imag(kappa) == pytest.approx(rhs, rel=1e-6)

    def test_pair_and_sanity_bounds(self):
        # integrand extremes give E <= K (1+kappa^2); Cauchy-Schwarz on
        # sqrt(integrand) gives E K >= (pi/2)^2
        for kappa in (0.0, 0.5, 2.0, 40.0):
            pair = ellip_pair_imag(kappa)
            assert pair.k_val > 0 and pair.e_val > 0
            assert pair.e_val <= pair.k_val * (1 + kappa**2) * (1 + 1e-12)
            assert pair.e_val * pair.k_val >= (np.pi / 2) ** 2 * (1 - 1e-12)

    def test_vectorized(self):
        k = ellip_k_imag(np.array([0.0, 1.0]))
        assert k.shape == (2,)
        assert k[0] == pytest.approx(np.pi / 2)

    @pytest.mark.parametrize("bad", [float("nan"), float("inf"), -1.0])
    def test_domain_errors(self, bad):
        with pytest.raises(DomainError):
            ellip_k_imag(bad)


class TestDigamma:
    def test_first_values(self):
        p1, ph = digamma_seq(3)
        assert p1[0] == pytest.approx(1 - np.euler_gamma, abs=1e-15)
        assert ph[0] == pytest.approx(-np.euler_gamma - 2 * math.log(2) + 2, abs=1e-15)

    def test_recurrence(self):
        p1, _ = digamma_seq(50)
        psi1 = np.concatenate([[-np.euler_gamma], p1])  # psi(1), psi(2), ...
        for n in range(1, 51):
            assert psi1[n] - psi1[n - 1] == pytest.approx(1.0 / n, abs=1e-15)

    def test_against_scipy(self):
        p1, ph = digamma_seq(40)
        n = np.arange(1, 41)
        assert np.max(np.abs(p1 - scipy_psi(n + 1.0))) < 1e-13
        assert np.max(np.abs(ph - scipy_psi(n + 0.5))) < 1e-13

    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            digamma_seq(0)


class TestInversionSeries:
    def test_value_at_zero_is_first_term(self):
        p1, ph = digamma_seq(1)
        first_term = -0.25 * (p1[0] - ph[0])  # c_1 (psi(2)-psi(3/2)) (-1)^1
        assert k_inversion_series(0.0) == pytest.approx(first_term, abs=1e-16)

    def test_even_in_argument(self):
        assert k_inversion_series(0.37) == k_inversion_series(-0.37)
        assert e_inversion_series(0.52) == e_inversion_series(-0.52)

    @pytest.mark.parametrize("d", [0.1, 0.3, 0.5])
    def test_k_connection_identity(self, d):
        # K(i/d) + (2 d log d / pi) K(i d) - 2 d log 2 - d^3 f(d) = 0
        resid = (ellip_k_imag(1 / d) + (2 * d * math.log(d) / np.pi) * ellip_k_imag(d)
                 - 2 * d * math.log(2) - d**3 * k_inversion_series(d))
        assert abs(resid) < 1e-13

    @pytest.mark.parametrize("d", [0.2, 0.5, 0.8])
    def test_e_connection_identity(self, d):
        resid = (ellip_e_imag(1 / d)
                 - (2 * (ellip_e_imag(d) - (1 + d * d) * ellip_k_imag(d)) / (np.pi * d))
                 * math.log(d) - 1.0 / d - d * e_inversion_series(d))
        assert abs(resid) < 1e-9

    def test_e_series_matches_defining_formula(self):
        # g = 1 + (1+z^2)((2K(iz)/pi - 1)/z^2 - z f'(z) - 2 f(z)), with the
        # derivative taken by central differences
        d, h = 0.3, 1e-6
        fp = (k_inversion_series(d + h) - k_inversion_series(d - h)) / (2 * h)
        direct = 1 + (1 + d * d) * ((2 * ellip_k_imag(d) / np.pi - 1) / d**2
                                    - d * fp - 2 * k_inversion_series(d))
        assert e_inversion_series(d) == pytest.approx(direct, rel=1e-9)

    def test_small_argument_limit(self):
        assert e_inversion_series(1e-3) == pytest.approx(e_inversion_series(0.0), abs=1e-5)

    def test_tail_bound_recorded(self):
        value, tail = k_inversion_series_tail(0.5)
        assert tail < 1e-16 * abs(value) * 10 + 1e-30

    def test_domain_errors(self):
        from np_revolve import NumericalError

        with pytest.raises(DomainError):
            k_inversion_series(1.0)
        with pytest.raises(DomainError):
            k_inversion_series(0.95)  # beyond default delta_max
        assert k_inversion_series(0.92, delta_max=0.95) < 0  # but configurable
        with pytest.raises(NumericalError):
            k_inversion_series(0.999, delta_max=0.9995)  # truncation cap


def a0_quad_oracle(d):
    return d * d * quad(lambda t: (d * d + np.sin(t) ** 2) ** -1.5, 0, np.pi / 2,
                        epsabs=1e-13, epsrel=1e-13, limit=500)[0]


def b0_quad_oracle(d):
    return quad(lambda t: np.sin(t) ** 2 * (d * d + np.sin(t) ** 2) ** -1.5, 0,
                np.pi / 2, epsabs=1e-13, epsrel=1e-13, limit=500)[0]


class TestAzimuthalMoments:
    @pytest.mark.parametrize("d", [0.01, 0.5, 2.0, 10.0])
    def test_closed_form_matches_quadrature(self, d):
        a0, b0 = azimuthal_moments0(d)
        assert a0 == pytest.approx(a0_quad_oracle(d), abs=1e-10)
        assert b0 == pytest.approx(b0_quad_oracle(d), abs=1e-10)

    def test_small_delta_asymptotics(self):
        for d in (1e-2, 1e-3, 1e-4):
            a0, b0 = azimuthal_moments0(d)
            assert abs(a0 - 1.0) < 2.0 * d * d * abs(math.log(d))
            assert abs(b0 + math.log(d)) < 1.0  # log cancellation, bounded rest

    def test_large_delta_trend(self):
        a0, _ = azimuthal_moments0(100.0)
        assert 100.0 * a0 == pytest.approx(np.pi / 2, rel=0.02)

    def test_unimodal_not_monotone(self):
        # a0 rises from 1 to a single interior maximum and then decays; the
        # derivative changes sign exactly once on (0, 10]
        grid = np.logspace(-3, 1, 80)
        vals = np.array([azimuthal_moments0(d)[0] for d in grid])
        signs = np.sign(np.diff(vals))
        changes = np.sum(np.abs(np.diff(signs)) > 0)
        assert changes == 1
        assert vals.max() > vals[0] and vals[-1] < vals[0]

    def test_mode_zero_agrees_with_closed_form(self):
        a, b = azimuthal_moments_quad(0, 0.5)
        a0, b0 = azimuthal_moments0(0.5)
        assert a == pytest.approx(a0, abs=1e-9)
        assert b == pytest.approx(b0, abs=1e-9)

    def test_oscillatory_decay_in_k(self):
        a1, _ = azimuthal_moments_quad(1, 1.0)
        a8, _ = azimuthal_moments_quad(8, 1.0)
        assert abs(a8) < abs(a1)

    def test_mode_three_matches_independent_panels(self):
        d = 0.1
        _, b3 = azimuthal_moments_quad(3, d)
        ref = gauss_panels(
            lambda t: math.cos(6 * t) * math.sin(t) ** 2 * (d * d + math.sin(t) ** 2) ** -1.5,
            0.0, np.pi / 2, panels=2000)
        assert math.isfinite(b3)
        assert b3 == pytest.approx(ref, abs=1e-9)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            azimuthal_moments0(0.0)
        with pytest.raises(DomainError):
            azimuthal_moments_quad(0, -1.0)
        with pytest.raises(DomainError):
            azimuthal_moments_quad(-2, 0.5)
