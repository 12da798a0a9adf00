"""Point evaluation of the boundary-integral kernels.

Five kernels matter here: the planar double-layer (Neumann-Poincare)
kernel on the generating curve, its zeroth azimuthal mode obtained by
integrating the three-dimensional kernel over the rotation angle, the
general mode-k variant, the mode-k single-layer kernel, and the bounded
remainder left after subtracting both the planar kernel and the
logarithmic singularity from the zeroth mode:

    mode0(p, q)  = planar(p, q) a0(d) - c(p) b0(d),     d = delta(p, q),
    remainder    = mode0 - planar - c(p) log|p - q|,    c = vp/(4 pi y).

All kernels are smooth off the diagonal; the zeroth mode and single
layer carry a log(delta) singularity whose coefficient is analytic in
delta^2, which is what the Nystrom assembly in :mod:`discretize`
exploits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, SingularEvaluationError
from .geometry import CurveSample
from . import special

# below this separation the subtraction forms of the remainder lose
# digits to cancellation; switch to the series expansions
NEAR_DIAGONAL_DELTA = 1e-3

LOG_FREE_B0_CONST = 2.0 * math.log(2.0) - 1.0  # b0(d) + log d -> this as d -> 0


@dataclass(frozen=True)
class KernelSplit:
    """Kernel value split as smooth_part + log_coefficient * log|p-q|."""

    smooth_part: float
    log_coefficient: float
    raw: float


def _pair_geometry(p: CurveSample, q: CurveSample):
    dx = p.x - q.x
    dy = p.y - q.y
    r2 = dx * dx + dy * dy
    d2 = r2 / (4.0 * p.y * q.y)
    return dx, dy, r2, d2


def _coincident(r2: float) -> bool:
    return r2 == 0.0


def planar_np_kernel(p: CurveSample, q: CurveSample) -> float:
    """Two-dimensional double-layer kernel (p-q).n_p / (2 pi |p-q|^2).

    On the diagonal the continuous extension curvature/(4 pi) is
    returned (positive orientation); the sign convention is pinned by
    the circle, where the kernel is the constant 1/(4 pi a).
    """
    dx, dy, r2, _ = _pair_geometry(p, q)
    if _coincident(r2):
        return p.curvature / (4.0 * np.pi)
    return (dx * p.normal[0] + dy * p.normal[1]) / r2 / (2.0 * np.pi)


def mode0_np_kernel(p: CurveSample, q: CurveSample) -> float:
    """Zeroth azimuthal mode of the NP kernel, via closed elliptic forms."""
    dx, dy, r2, d2 = _pair_geometry(p, q)
    if _coincident(r2):
        raise SingularEvaluationError("mode0 kernel is log-singular on the diagonal")
    a0, b0 = special.azimuthal_moments0(math.sqrt(d2))
    c = p.v_p / (4.0 * np.pi * p.y)
    return planar_np_kernel(p, q) * a0 - c * b0


def mode_np_kernel(k: int, p: CurveSample, q: CurveSample) -> float:
    """Mode-k NP kernel through the azimuthal moment integrals."""
    dx, dy, r2, d2 = _pair_geometry(p, q)
    if _coincident(r2):
        raise SingularEvaluationError("mode kernels are singular on the diagonal")
    ak, bk = special.azimuthal_moments_quad(k, math.sqrt(d2))
    c = p.v_p / (4.0 * np.pi * p.y)
    return planar_np_kernel(p, q) * ak - c * bk


def mode_np_kernel_reduced(k: int, p: CurveSample, q: CurveSample,
                           tol: float = 1e-13) -> float:
    """Mode-k NP kernel by direct quadrature of the reduced angle integral.

    sqrt(y y')/pi * int_0^{pi/2} cos(2kt) [(p-q).n_p - 2 vp y' sin^2 t]
    / (|p-q|^2 + 4 y y' sin^2 t)^(3/2) dt.  Independent evaluation route
    used to cross-check :func:`mode_np_kernel`.
    """
    dx, dy, r2, _ = _pair_geometry(p, q)
    if _coincident(r2):
        raise SingularEvaluationError("mode kernels are singular on the diagonal")
    dot = dx * p.normal[0] + dy * p.normal[1]
    yy = p.y * q.y

    def f(t):
        s2 = math.sin(t) ** 2
        return math.cos(2 * k * t) * (dot - 2.0 * p.v_p * q.y * s2) / (
            r2 + 4.0 * yy * s2) ** 1.5

    val, _ = quad(f, 0.0, 0.5 * math.pi, epsabs=tol, epsrel=tol, limit=400)
    return math.sqrt(yy) / math.pi * val


def mode0_single_layer_kernel(p: CurveSample, q: CurveSample) -> float:
    """Zeroth-mode single-layer kernel -K(i/d) / (2 pi d), always negative."""
    _, _, r2, d2 = _pair_geometry(p, q)
    if _coincident(r2):
        raise SingularEvaluationError("single-layer kernel is log-singular on the diagonal")
    d = math.sqrt(d2)
    return -special.ellip_k_imag(1.0 / d) / (2.0 * np.pi * d)


def mode_single_layer_kernel(k: int, p: CurveSample, q: CurveSample,
                             tol: float = 1e-13) -> float:
    """Mode-k single-layer kernel -(1/2 pi) int cos(2kt)(d^2+sin^2 t)^(-1/2) dt."""
    if k < 0 or int(k) != k:
        raise DomainError("mode index k must be a nonnegative integer")
    _, _, r2, d2 = _pair_geometry(p, q)
    if _coincident(r2):
        raise SingularEvaluationError("single-layer kernel is log-singular on the diagonal")

    def f(t):
        return math.cos(2 * k * t) / math.sqrt(d2 + math.sin(t) ** 2)

    val, _ = quad(f, 0.0, 0.5 * math.pi, epsabs=tol, epsrel=tol, limit=400)
    return -val / (2.0 * np.pi)


def _log_coefficient(p: CurveSample, q: CurveSample, d: float) -> float:
    """Coefficient of log(delta) in the mode0 kernel at (p, q)."""
    kst = planar_np_kernel(p, q)
    c = p.v_p / (4.0 * np.pi * p.y)
    ha = float(special.a0_log_coefficient(np.atleast_1d(d))[0])
    hb = float(special.one_plus_b0_log_coefficient(np.atleast_1d(d))[0]) - 1.0
    return kst * ha - c * hb


def remainder_kernel(p: CurveSample, q: CurveSample) -> float:
    """Bounded remainder mode0 - planar - c log|p-q|.

    Off the diagonal this is evaluated by subtraction; below separation
    ``NEAR_DIAGONAL_DELTA`` the series expansions take over because the
    subtraction loses digits in a0 - 1.  The diagonal value is the
    continuous extension -c(p) (2 log 2 - 1 + log(2 y)).
    """
    dx, dy, r2, d2 = _pair_geometry(p, q)
    c = p.v_p / (4.0 * np.pi * p.y)
    if _coincident(r2):
        return -c * (LOG_FREE_B0_CONST + math.log(2.0 * p.y))
    d = math.sqrt(d2)
    kst = planar_np_kernel(p, q)
    if d >= NEAR_DIAGONAL_DELTA:
        a0, b0 = special.azimuthal_moments0(d)
        return kst * a0 - c * b0 - kst - c * 0.5 * math.log(r2)
    # series route: R* = [P - planar - c log(2 sqrt(y y'))] + (Q - c) log d
    g = special.e_inversion_series(d)
    f = special.k_inversion_series(d)
    p_minus_k = kst * d2 * (g - 1.0) / (1.0 + d2) - c * (
        LOG_FREE_B0_CONST + d2 * (f - (g - 1.0) / (1.0 + d2)))
    q_minus_c = _log_coefficient(p, q, d) - c
    return p_minus_k - c * 0.5 * math.log(4.0 * p.y * q.y) + q_minus_c * math.log(d)


def mode0_np_split(p: CurveSample, q: CurveSample) -> KernelSplit:
    """Mode0 kernel split against log|p-q| with its smooth complement."""
    dx, dy, r2, d2 = _pair_geometry(p, q)
    if _coincident(r2):
        raise SingularEvaluationError("split is defined for distinct points")
    d = math.sqrt(d2)
    raw = mode0_np_kernel(p, q)
    coef = _log_coefficient(p, q, d)
    return KernelSplit(smooth_part=raw - coef * 0.5 * math.log(r2),
                       log_coefficient=coef, raw=raw)
