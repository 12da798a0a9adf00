"""Complete elliptic integrals at imaginary modulus and related series.

Everything here is expressed through the two integrals

    K(i kappa) = int_0^{pi/2} (1 + kappa^2 sin^2 t)^(-1/2) dt,
    E(i kappa) = int_0^{pi/2} (1 + kappa^2 sin^2 t)^(1/2) dt,

evaluated by the imaginary-modulus transformation to a standard modulus
m = kappa^2/(1+kappa^2) followed by AGM iteration, which is exact to
rounding for every real kappa >= 0.

The inversion series ``k_inversion_series`` and ``e_inversion_series``
are the analytic (log-free) parts of the kappa -> 1/kappa connection
formulas

    K(i/d) = -(2 d log d / pi) K(i d) + 2 d log 2 + d^3 f(d),
    E(i/d) = (2 (E(i d) - (1+d^2) K(i d)) / (pi d)) log d + 1/d + d g(d),

valid for 0 < d < 1.  Both f and g are even power series with radius 1;
their coefficients come from digamma differences psi(n+1) - psi(n+1/2).
The azimuthal moment integrals that reduce the three-dimensional kernel
to the generating plane are provided in closed form for the zeroth mode
and by adaptive quadrature for general mode index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, NumericalError

EULER_GAMMA = float(np.euler_gamma)

_SERIES_TERMS = 200
_TABLE_TERMS = 220  # a little headroom over the truncation cap


def _half_factorial_sq(nmax: int) -> np.ndarray:
    """c_n = ((2n-1)!!/(2n)!!)^2 for n = 0..nmax (squared Wallis ratios)."""
    c = np.ones(nmax + 1)
    for n in range(1, nmax + 1):
        c[n] = c[n - 1] * ((2 * n - 1) / (2 * n)) ** 2
    return c


_CN = _half_factorial_sq(_TABLE_TERMS)
_N = np.arange(1, _TABLE_TERMS + 1)
_PSI_N1 = -EULER_GAMMA + np.cumsum(1.0 / _N)
_PSI_NH = -EULER_GAMMA - 2.0 * math.log(2.0) + 2.0 * np.cumsum(1.0 / (2.0 * _N - 1.0))
_DN = _PSI_N1 - _PSI_NH

# coefficient tables, index n-1 holds the z^(2n-2) coefficient
_F_COEF = _CN[1:] * _DN * ((-1.0) ** _N)
_G_COEF = _CN[1:] * ((-1.0) ** _N) * (1.0 - 2.0 * _N * _DN)
# (E(iz) - (1+z^2) K(iz)) * 2/(pi (1+z^2)) = z^2/(1+z^2) * sum HA_n z^(2n-2)
_HA_COEF = ((-1.0) ** _N) * (_CN[1:] / (1.0 - 2.0 * _N) - _CN[1:] + _CN[:-1])
# 1 - 2 E(iz)/(pi (1+z^2)) = z^2/(1+z^2) * sum UB_n z^(2n-2)
_UB_COEF = -((-1.0) ** _N) * _CN[1:] / (1.0 - 2.0 * _N)
_UB_COEF[0] = 0.75


@dataclass(frozen=True)
class EllipticPair:
    """Values of the first and second complete integrals at one argument."""

    k_val: float
    e_val: float


def _agm_ke_imag(kappa: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized K(i kappa), E(i kappa) for kappa >= 0 via AGM.

    Standard-modulus reduction: with m = kappa^2/(1+kappa^2),
    K(i kappa) = K(m)/sqrt(1+kappa^2) and E(i kappa) = E(m)*sqrt(1+kappa^2).
    The AGM scale a_n, b_n, c_n gives K(m) = pi/(2 a_inf) and
    E(m)/K(m) = 1 - sum 2^(n-1) c_n^2.
    """
    kp2 = 1.0 / (1.0 + kappa * kappa)  # complementary parameter 1 - m
    m = kappa * kappa * kp2
    a = np.ones_like(kp2)
    b = np.sqrt(kp2)
    csum = 0.5 * m  # n = 0 term, c_0^2 = m
    pow2 = 0.5
    for _ in range(40):
        c = 0.5 * (a - b)
        # a stalled gap sits at ulp(a); stop relative to the largest scale,
        # otherwise the 2^n c^2 terms eventually pollute the E sum
        if np.max(np.abs(c)) <= 5e-16 * np.max(a):
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        pow2 *= 2.0
        csum = csum + pow2 * c * c
    k_std = np.pi / (2.0 * a)
    e_std = k_std * (1.0 - csum)
    kp = np.sqrt(kp2)
    return kp * k_std, e_std / kp


def _as_checked_array(kappa, allow_zero=True):
    arr = np.asarray(kappa, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    if np.any(arr < 0.0) or (not allow_zero and np.any(arr == 0.0)):
        raise DomainError("argument must be %s" % ("nonnegative" if allow_zero else "positive"))
    return arr


def ellip_k_imag(kappa):
    """First complete elliptic integral at imaginary modulus i*kappa."""
    arr = _as_checked_array(kappa)
    k, _ = _agm_ke_imag(arr)
    return float(k) if np.isscalar(kappa) or arr.ndim == 0 else k


def ellip_e_imag(kappa):
    """Second complete elliptic integral at imaginary modulus i*kappa."""
    arr = _as_checked_array(kappa)
    _, e = _agm_ke_imag(arr)
    return float(e) if np.isscalar(kappa) or arr.ndim == 0 else e


def ellip_pair_imag(kappa: float) -> EllipticPair:
    """Both integrals at i*kappa as an :class:`EllipticPair`."""
    arr = _as_checked_array(float(kappa))
    k, e = _agm_ke_imag(arr)
    return EllipticPair(k_val=float(k), e_val=float(e))


def digamma_seq(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """psi(n+1) and psi(n+1/2) for n = 1..n_max.

    psi(n+1) = -gamma + sum_{k<=n} 1/k and
    psi(n+1/2) = -gamma - 2 log 2 + 2 sum_{k<=n} 1/(2k-1).
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    n = np.arange(1, n_max + 1)
    psi_n1 = -EULER_GAMMA + np.cumsum(1.0 / n)
    psi_nh = -EULER_GAMMA - 2.0 * math.log(2.0) + 2.0 * np.cumsum(1.0 / (2.0 * n - 1.0))
    return psi_n1, psi_nh


def _eval_even_series_scalar(coef: np.ndarray, delta: float) -> tuple[float, float]:
    """Truncated sum of coef[n-1] * delta^(2n-2); returns (value, tail bound).

    Stops once a term drops below 1e-16 of the partial sum; the last
    discarded term magnitude doubles as the recorded tail bound.
    """
    z2 = delta * delta
    total = 0.0
    power = 1.0
    tail = 0.0
    for i in range(_SERIES_TERMS):
        term = coef[i] * power
        total += term
        power *= z2
        tail = abs(coef[min(i + 1, len(coef) - 1)] * power)
        if abs(term) <= 1e-16 * max(abs(total), 1e-300) and i >= 2:
            return total, tail
    raise NumericalError(
        f"series truncation cap ({_SERIES_TERMS} terms) hit at delta={delta}; "
        "argument too close to the radius of convergence"
    )


def _check_series_arg(delta: float, delta_max: float, allow_zero: bool) -> float:
    d = float(delta)
    if not math.isfinite(d):
        raise DomainError("delta must be finite")
    d = abs(d)  # even series
    if d >= 1.0:
        raise DomainError("series only converges for |delta| < 1")
    if d > delta_max:
        raise DomainError(f"delta={d} exceeds configured delta_max={delta_max}")
    if d == 0.0 and not allow_zero:
        raise DomainError("delta must be nonzero")
    return d


def k_inversion_series(delta: float, delta_max: float = 0.9) -> float:
    """Analytic part f(delta) of the modulus-inversion formula for K.

    K(i/d) + (2 d log d / pi) K(i d) - 2 d log 2 = d^3 f(d) for 0 < d < 1.
    """
    d = _check_series_arg(delta, delta_max, allow_zero=True)
    value, _ = _eval_even_series_scalar(_F_COEF, d)
    return value


def k_inversion_series_tail(delta: float, delta_max: float = 0.9) -> tuple[float, float]:
    """Like :func:`k_inversion_series` but also returns the tail bound."""
    d = _check_series_arg(delta, delta_max, allow_zero=True)
    return _eval_even_series_scalar(_F_COEF, d)


def e_inversion_series(delta: float, delta_max: float = 0.9) -> float:
    """Analytic part g(delta) of the modulus-inversion formula for E.

    g(z) = 1 + (1+z^2) ((2 K(iz)/pi - 1)/z^2 - z f'(z) - 2 f(z)); the
    z = 0 singularity is removable and the series below evaluates the
    continuation directly, so no small-z switch is needed.
    """
    d = _check_series_arg(delta, delta_max, allow_zero=True)
    value, _ = _eval_even_series_scalar(_G_COEF, d)
    return 1.0 + (1.0 + d * d) * value


def _poly_even(coef: np.ndarray, z2: np.ndarray) -> np.ndarray:
    """Horner evaluation of sum coef[k] z2^k over an array."""
    out = np.zeros_like(z2)
    for c in coef[::-1]:
        out = out * z2 + c
    return out


def k_inversion_series_arr(delta2: np.ndarray) -> np.ndarray:
    """Vectorized f evaluated from delta^2 (assembly internals)."""
    return _poly_even(_F_COEF, delta2)


def e_inversion_series_arr(delta2: np.ndarray) -> np.ndarray:
    """Vectorized g evaluated from delta^2 (assembly internals)."""
    return 1.0 + (1.0 + delta2) * _poly_even(_G_COEF, delta2)


def a0_log_coefficient(delta: np.ndarray) -> np.ndarray:
    """Coefficient of log(delta) in the zeroth azimuthal moment a0.

    Equals 2 (E(i d) - (1+d^2) K(i d)) / (pi (1+d^2)); evaluated by a
    cancellation-free series below d = 1/2 and by AGM above.
    """
    d = np.asarray(delta, dtype=float)
    z2 = d * d
    out = np.empty_like(d)
    lo = d < 0.5
    out[lo] = z2[lo] * _poly_even(_HA_COEF, z2[lo]) / (1.0 + z2[lo])
    hi = ~lo
    if np.any(hi):
        k, e = _agm_ke_imag(d[hi])
        out[hi] = 2.0 * (e - (1.0 + z2[hi]) * k) / (np.pi * (1.0 + z2[hi]))
    return out


def one_plus_b0_log_coefficient(delta: np.ndarray) -> np.ndarray:
    """1 + (coefficient of log(delta) in b0) = 1 - 2 E(i d)/(pi (1+d^2)).

    The direct form cancels to O(d^2) as d -> 0, hence the series branch.
    """
    d = np.asarray(delta, dtype=float)
    z2 = d * d
    out = np.empty_like(d)
    lo = d < 0.5
    out[lo] = z2[lo] * _poly_even(_UB_COEF, z2[lo]) / (1.0 + z2[lo])
    hi = ~lo
    if np.any(hi):
        _, e = _agm_ke_imag(d[hi])
        out[hi] = 1.0 - 2.0 * e / (np.pi * (1.0 + z2[hi]))
    return out


def azimuthal_moments0(delta):
    """Zeroth-mode azimuthal moments (a0, b0) in closed elliptic form.

    a0(d) = d E(i/d) / (1+d^2),  b0(d) = K(i/d)/d - a0(d); these equal
    d^2 int_0^{pi/2} (d^2+sin^2 t)^(-3/2) dt and
    int_0^{pi/2} sin^2 t (d^2+sin^2 t)^(-3/2) dt respectively.
    """
    scalar = np.isscalar(delta) or np.asarray(delta).ndim == 0
    d = np.atleast_1d(np.asarray(delta, dtype=float))
    if not np.all(np.isfinite(d)) or np.any(d <= 0.0):
        raise DomainError("delta must be positive and finite")
    k, e = _agm_ke_imag(1.0 / d)
    a0 = d * e / (1.0 + d * d)
    b0 = k / d - a0
    if scalar:
        return float(a0[0]), float(b0[0])
    return a0, b0


def azimuthal_moments_quad(k: int, delta: float, tol: float = 1e-12) -> tuple[float, float]:
    """Mode-k azimuthal moments (a_k, b_k) by adaptive quadrature.

    a_k(d) = d^2 int_0^{pi/2} cos(2kt) (d^2+sin^2 t)^(-3/2) dt,
    b_k(d) =     int_0^{pi/2} cos(2kt) sin^2 t (d^2+sin^2 t)^(-3/2) dt.
    The integrand peaks like d^(-3) near t=0, so the interval is split at
    t ~ d to help the adaptive rule.
    """
    if k < 0 or int(k) != k:
        raise DomainError("mode index k must be a nonnegative integer")
    d = float(delta)
    if not math.isfinite(d) or d <= 0.0:
        raise DomainError("delta must be positive and finite")
    d2 = d * d

    def fa(t):
        return math.cos(2 * k * t) * (d2 + math.sin(t) ** 2) ** -1.5

    def fb(t):
        s2 = math.sin(t) ** 2
        return math.cos(2 * k * t) * s2 * (d2 + s2) ** -1.5

    split = min(10.0 * d, 0.5 * math.pi / 2.0)
    pieces_a = []
    pieces_b = []
    for lo, hi in ((0.0, split), (split, 0.5 * math.pi)):
        if hi <= lo:
            continue
        pieces_a.append(quad(fa, lo, hi, epsabs=tol, epsrel=tol, limit=500)[0])
        pieces_b.append(quad(fb, lo, hi, epsabs=tol, epsrel=tol, limit=500)[0])
    return d2 * sum(pieces_a), sum(pieces_b)
