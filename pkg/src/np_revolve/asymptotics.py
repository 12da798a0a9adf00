"""Weyl constants from the curve and power-law fits of computed spectra.

For a smooth generating curve the j-th positive and negative eigenvalues
decay like c0_plus / j and c0_minus / j, where

    c0_plus  = -(1/4 pi) * integral over {vp < 0} of (vp / y) dsigma,
    c0_minus =  (1/4 pi) * integral over {vp > 0} of (vp / y) dsigma,

and c0 = c0_plus + c0_minus governs |eig_j| ~ c0 / j.  The difference
c0_minus - c0_plus equals the hyperbolic area of the section over 4 pi.
The integrals are split at the zeros of vp and each signed arc is
integrated with composite Gauss panels, so the kink of |vp| never
crosses a panel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import GeneratingCurve, hyperbolic_area_over_4pi
from .spectral import SpectrumResult

_GAUSS_ORDER = 12


@dataclass
class WeylFit:
    """Least-squares constants from j * eig_j over a fit window."""

    fitted_c0_plus: float
    fitted_c0_minus: float
    fitted_c0: float
    std_plus: float
    std_minus: float
    std_total: float
    window: tuple[int, int]


@dataclass
class DecayFit:
    """Log-log slope of |eig_j| against j with its standard error."""

    slope: float
    stderr: float
    window: tuple[int, int]


@dataclass
class AsymptoticsReport:
    curve_id: str
    n_quad: int
    c0_plus: float
    c0_minus: float
    c0: float
    hyperbolic_area_over_4pi: float
    fit: WeylFit | None
    decay: DecayFit | None

    def relative_errors(self) -> dict:
        if self.fit is None:
            return {}
        return {
            "plus": abs(self.fit.fitted_c0_plus - self.c0_plus) / self.c0_plus,
            "minus": abs(self.fit.fitted_c0_minus - self.c0_minus) / self.c0_minus,
            "total": abs(self.fit.fitted_c0 - self.c0) / self.c0,
        }

    def to_dict(self) -> dict:
        out = {
            "curve_id": self.curve_id,
            "n_quad": self.n_quad,
            "c0_plus": self.c0_plus,
            "c0_minus": self.c0_minus,
            "c0": self.c0,
            "hyperbolic_area_over_4pi": self.hyperbolic_area_over_4pi,
        }
        if self.fit is not None:
            out["fit"] = {
                "window": list(self.fit.window),
                "fitted_c0_plus": self.fit.fitted_c0_plus,
                "fitted_c0_minus": self.fit.fitted_c0_minus,
                "fitted_c0": self.fit.fitted_c0,
                "std_plus": self.fit.std_plus,
                "std_minus": self.fit.std_minus,
                "std_total": self.fit.std_total,
                "relative_errors": self.relative_errors(),
            }
        if self.decay is not None:
            out["decay"] = {
                "window": list(self.decay.window),
                "slope": self.decay.slope,
                "stderr": self.decay.stderr,
            }
        return out


def _vp_at(curve: GeneratingCurve, t: float) -> float:
    fr = curve.frame(np.atleast_1d(math.fmod(float(t), 2.0 * math.pi)))
    return float(fr["xp"][0] / fr["speed"][0])


def _bisect_root(curve: GeneratingCurve, lo: float, hi: float,
                 flo: float) -> float:
    """Bisection with known endpoint signs (robust to tiny vp values)."""
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        fm = _vp_at(curve, mid)
        if fm == 0.0:
            return mid
        if (flo > 0.0) == (fm > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sign_arcs(curve: GeneratingCurve, n: int) -> list[tuple[float, float]]:
    """Partition [0, 2 pi) into arcs on which vp has constant sign."""
    known = curve.vp_sign_breakpoints()
    if known is not None and len(known) > 0:
        bps = np.sort(np.mod(np.asarray(known, dtype=float), 2.0 * np.pi))
    else:
        m = max(8 * n, 2048)
        tt = 2.0 * np.pi * (np.arange(m) + 0.5) / m
        fr = curve.frame(tt)
        vp = fr["xp"] / fr["speed"]
        roots = []
        for i in range(m):
            j = (i + 1) % m
            if vp[i] == 0.0:
                roots.append(tt[i])
            elif vp[i] * vp[j] < 0.0:
                roots.append(_bisect_root(curve, tt[i], tt[i] + 2.0 * np.pi / m,
                                          float(vp[i])))
        bps = np.sort(np.mod(np.asarray(roots), 2.0 * np.pi))
    if len(bps) == 0:
        return [(0.0, 2.0 * np.pi)]
    arcs = []
    for i in range(len(bps)):
        lo = bps[i]
        hi = bps[(i + 1) % len(bps)]
        if i == len(bps) - 1:
            hi += 2.0 * np.pi
        if hi - lo > 1e-12:
            arcs.append((float(lo), float(hi)))
    return arcs


def _arc_integral(curve: GeneratingCurve, lo: float, hi: float, panels: int) -> float:
    """Gauss-panel integral of vp/y * speed over [lo, hi]."""
    nodes, wts = np.polynomial.legendre.leggauss(_GAUSS_ORDER)
    edges = np.linspace(lo, hi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        tt = mid + half * nodes
        fr = curve.frame(tt)
        total += half * float(np.sum(wts * fr["xp"] / fr["y"]))
    return total  # xp = vp * speed, so the speed factor is already present


def weyl_constants(curve: GeneratingCurve, n: int = 512) -> tuple[float, float]:
    """(c0_plus, c0_minus) by sign-split Gauss quadrature."""
    arcs = _sign_arcs(curve, n)
    panels = max(4, n // max(len(arcs), 1) // _GAUSS_ORDER + 4)
    c0p = 0.0
    c0m = 0.0
    for lo, hi in arcs:
        val = _arc_integral(curve, lo, hi, panels)
        if val > 0.0:
            c0m += val
        else:
            c0p -= val
    return c0p / (4.0 * np.pi), c0m / (4.0 * np.pi)


def weyl_constant_total(curve: GeneratingCurve, n: int = 512) -> float:
    """c0 = (1/4 pi) * integral of |vp|/y dsigma (independent route)."""
    arcs = _sign_arcs(curve, n)
    panels = max(4, n // max(len(arcs), 1) // _GAUSS_ORDER + 4)
    return sum(abs(_arc_integral(curve, lo, hi, panels)) for lo, hi in arcs) / (4.0 * np.pi)


def default_fit_window(n: int) -> tuple[int, int]:
    """Skip the non-asymptotic head and the discretization-polluted tail."""
    return 20, max(30, min(60, n // 16))


def _check_window(spectrum: SpectrumResult, window) -> tuple[int, int]:
    j_min, j_max = int(window[0]), int(window[1])
    if j_max - j_min + 1 < 10:
        raise DomainError("fit window must contain at least 10 points")
    if j_min < 1:
        raise DomainError("fit window must start at j >= 1")
    limit = min(len(spectrum.pos_eigs), len(spectrum.neg_eigs), len(spectrum.all_eigs))
    if j_max > limit:
        raise DomainError(f"fit window end {j_max} exceeds available eigenvalues ({limit})")
    return j_min, j_max


def fit_weyl(spectrum: SpectrumResult, window=None) -> WeylFit:
    """Fit j * eig_j ~ const over the window, per sign class and overall."""
    window = window or default_fit_window(spectrum.n)
    j_min, j_max = _check_window(spectrum, window)
    j = np.arange(j_min, j_max + 1, dtype=float)
    sel = slice(j_min - 1, j_max)
    scaled_p = j * spectrum.pos_eigs[sel]
    scaled_m = j * spectrum.neg_eigs[sel]
    scaled_a = j * np.abs(spectrum.all_eigs[sel])
    return WeylFit(
        fitted_c0_plus=float(np.mean(scaled_p)),
        fitted_c0_minus=float(np.mean(scaled_m)),
        fitted_c0=float(np.mean(scaled_a)),
        std_plus=float(np.std(scaled_p)),
        std_minus=float(np.std(scaled_m)),
        std_total=float(np.std(scaled_a)),
        window=(j_min, j_max),
    )


def decay_exponent(spectrum: SpectrumResult, window=None,
                   which: str = "all") -> DecayFit:
    """Slope of log|eig_j| vs log j over the window (~ -1 for smooth tori)."""
    window = window or default_fit_window(spectrum.n)
    series = {
        "all": np.abs(spectrum.all_eigs),
        "pos": spectrum.pos_eigs,
        "neg": spectrum.neg_eigs,
    }[which]
    j_min, j_max = int(window[0]), int(window[1])
    if j_max - j_min + 1 < 10:
        raise DomainError("fit window must contain at least 10 points")
    if j_max > len(series):
        raise DomainError(f"fit window end {j_max} exceeds available eigenvalues")
    vals = series[j_min - 1: j_max]
    if np.any(vals <= 0.0):
        raise DomainError("decay fit requires nonzero eigenvalues in the window")
    lx = np.log(np.arange(j_min, j_max + 1, dtype=float))
    ly = np.log(vals)
    m = len(lx)
    xm = lx - lx.mean()
    slope = float(np.sum(xm * ly) / np.sum(xm * xm))
    intercept = float(ly.mean() - slope * lx.mean())
    resid = ly - (intercept + slope * lx)
    var = float(np.sum(resid**2) / max(m - 2, 1))
    stderr = math.sqrt(var / float(np.sum(xm * xm)))
    return DecayFit(slope=slope, stderr=stderr, window=(j_min, j_max))


def build_report(curve: GeneratingCurve, spectrum: SpectrumResult | None = None,
                 window=None, quad_n: int = 1024) -> AsymptoticsReport:
    """Quadrature constants plus (optionally) fits against a spectrum."""
    c0p, c0m = weyl_constants(curve, quad_n)
    c0 = weyl_constant_total(curve, quad_n)
    fit = fit_weyl(spectrum, window) if spectrum is not None else None
    decay = decay_exponent(spectrum, window) if spectrum is not None else None
    return AsymptoticsReport(
        curve_id=curve.curve_id(),
        n_quad=quad_n,
        c0_plus=c0p,
        c0_minus=c0m,
        c0=c0,
        hyperbolic_area_over_4pi=hyperbolic_area_over_4pi(curve, max(quad_n, 512)),
        fit=fit,
        decay=decay,
    )
