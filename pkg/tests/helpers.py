"""Shared fixtures-by-function: catalog curves, cached pipelines, oracles."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# one line per acceptance criterion, echoed by the terminal-summary hook
ACCEPTANCE_LINES: list = []


def record_acceptance(number: int, name: str, ok: bool, elapsed: float) -> None:
    line = f"ACCEPTANCE {number} ({name}): {'PASS' if ok else 'FAIL'} [{elapsed:.1f}s]"
    ACCEPTANCE_LINES.append(line)
    print(line)

from np_revolve import (
    Circle,
    Ellipse,
    FourierStar,
    HolderStar,
    assemble_for_curve,
    compute_spectrum,
    rounded_square,
    sample_curve,
)

CURVE_FACTORIES = {
    "torus": lambda: Circle(2.0, 1.0),
    "big_torus": lambda: Circle(4.0, 2.0),
    "ellipse": lambda: Ellipse(2.5, 1.2, 0.6),
    "star": lambda: FourierStar(2.2, 0.8, cos_coeffs={3: 0.12}, sin_coeffs={5: 0.05}),
    "holder": lambda: HolderStar(2.0, 0.9, 0.35, 0.5),
    "square": lambda: rounded_square(2.0, 0.8),
}

SMOOTH_CATALOG = ("torus", "ellipse", "star")


@lru_cache(maxsize=None)
def curve(name):
    return CURVE_FACTORIES[name]()


@lru_cache(maxsize=None)
def samples(name, n):
    return sample_curve(curve(name), n)


@lru_cache(maxsize=None)
def operator_pair(name, n):
    return assemble_for_curve(curve(name), n)


@lru_cache(maxsize=None)
def spectrum(name, n, route="auto"):
    return compute_spectrum(curve(name), n, route)


def gauss_panels(f, a, b, panels=400, order=10):
    """Composite Gauss-Legendre quadrature, independent of scipy.quad."""
    nodes, wts = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        total += half * np.sum(wts * np.vectorize(f)(mid + half * nodes))
    return total


def split_quad(f, t, tol=1e-12):
    """Adaptive quadrature of a 2 pi-periodic integrand singular at s = t."""
    from scipy.integrate import quad

    v1 = quad(f, t + 1e-13, t + np.pi, epsabs=tol, epsrel=tol, limit=800)[0]
    v2 = quad(f, t + np.pi, t + 2 * np.pi - 1e-13, epsabs=tol, epsrel=tol, limit=800)[0]
    return v1 + v2
