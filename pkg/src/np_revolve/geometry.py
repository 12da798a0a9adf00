"""Generating curves in the half-plane y > 0 and their quadrature samples.

A generating curve is a closed, simple, positively oriented (counter-
clockwise) planar curve that stays strictly above the rotation axis
y = 0; rotating it about the x-axis produces the closed surface whose
boundary-integral spectrum this package computes.

Conventions used throughout: the unit tangent follows the positive
orientation, the outward normal is the tangent rotated by -90 degrees,
and ``vp`` denotes the first tangent component (equivalently minus the
second normal component), whose sign separates the convex and concave
parts of the surface of revolution.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np
from shapely.geometry import Polygon as _ShapelyPolygon

from .errors import DomainError, GeometryError

_VALIDATION_SAMPLES = 1024


def scaled_distance(p, q) -> float:
    """Scale-invariant separation |p-q| / (2 sqrt(y_p y_q)).

    Symmetric, zero iff p = q, and invariant under dilations about the
    rotation axis.  Both points must lie strictly above the axis.
    """
    px, py = float(p[0]), float(p[1])
    qx, qy = float(q[0]), float(q[1])
    if py <= 0.0 or qy <= 0.0:
        raise DomainError("scaled_distance requires points with y > 0")
    return math.hypot(px - qx, py - qy) / (2.0 * math.sqrt(py * qy))


@dataclass(frozen=True)
class CurveSample:
    """One quadrature node on a generating curve."""

    t: float
    pos: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    v_p: float
    speed: float
    weight: float
    curvature: float

    @property
    def x(self) -> float:
        return float(self.pos[0])

    @property
    def y(self) -> float:
        return float(self.pos[1])


class CurveSamples:
    """Struct-of-arrays view of n quadrature nodes (len/index like a list)."""

    def __init__(self, curve, t, x, y, tx, ty, speed, curvature, weight):
        self.curve = curve
        self.t = t
        self.x = x
        self.y = y
        self.tx = tx
        self.ty = ty
        self.nx = ty.copy()
        self.ny = -tx
        self.vp = tx.copy()
        self.speed = speed
        self.curvature = curvature
        self.weight = weight

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, i: int) -> CurveSample:
        return CurveSample(
            t=float(self.t[i]),
            pos=np.array([self.x[i], self.y[i]]),
            tangent=np.array([self.tx[i], self.ty[i]]),
            normal=np.array([self.nx[i], self.ny[i]]),
            v_p=float(self.vp[i]),
            speed=float(self.speed[i]),
            weight=float(self.weight[i]),
            curvature=float(self.curvature[i]),
        )

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def quad_weights(self) -> np.ndarray:
        """Quadrature weight times speed per node (integrates dsigma)."""
        return self.weight * self.speed

    def length(self) -> float:
        return float(np.sum(self.quad_weights))


class GeneratingCurve:
    """Base class; subclasses provide a parametrization over [0, 2 pi)."""

    kind = "abstract"
    regularity = "smooth"
    offset_nodes = False        # shift nodes by half a step (corner classes)
    corner_params: tuple = ()
    corner_angles: tuple = ()

    def frame(self, t: np.ndarray) -> dict:
        """Position and first/second derivative data at parameters t."""
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def curve_id(self) -> str:
        return self.describe()

    def curve_hash(self) -> bytes:
        return hashlib.sha256(self.describe().encode()).digest()[:8]

    def vp_sign_breakpoints(self):
        """Known parameter values where vp may change sign (or None)."""
        return None

    @property
    def is_smooth(self) -> bool:
        return not self.corner_params and self.regularity == "smooth"

    # -- validation ---------------------------------------------------
    def validate(self) -> None:
        if getattr(self, "_validated", False):
            return
        t = 2.0 * np.pi * (np.arange(_VALIDATION_SAMPLES) + 0.5) / _VALIDATION_SAMPLES
        fr = self.frame(t)
        x, y = fr["x"], fr["y"]
        if np.min(y) <= 0.0:
            raise GeometryError(
                f"curve touches or crosses the rotation axis (min y = {np.min(y):.6g})"
            )
        poly = _ShapelyPolygon(np.column_stack([x, y]))
        if not poly.is_valid:
            raise GeometryError("curve is not simple (self-intersection detected)")
        area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        if area <= 0.0:
            raise GeometryError("curve must be positively (counterclockwise) oriented")
        self._validated = True


class _RadialCurve(GeneratingCurve):
    """Curves of the form p(t) = (r(t) cos t, y0 + r(t) sin t)."""

    center_height: float

    def _radius(self, t):
        raise NotImplementedError

    def frame(self, t):
        r, rp, rpp = self._radius(t)
        y0 = self.center_height
        ct, st = np.cos(t), np.sin(t)
        x = r * ct
        y = y0 + r * st
        xp = rp * ct - r * st
        yp = rp * st + r * ct
        xpp = rpp * ct - 2.0 * rp * st - r * ct
        ypp = rpp * st + 2.0 * rp * ct - r * st
        speed = np.hypot(xp, yp)
        curvature = (xp * ypp - yp * xpp) / speed**3
        return dict(x=x, y=y, xp=xp, yp=yp, speed=speed, curvature=curvature)


class Circle(_RadialCurve):
    """Circle of radius a centered at height b; the torus generator."""

    kind = "circle"

    def __init__(self, center_height: float, radius: float):
        if radius <= 0.0:
            raise GeometryError("radius must be positive")
        if center_height <= radius:
            raise GeometryError("circle must stay above the axis (center_height > radius)")
        self.center_height = float(center_height)
        self.radius = float(radius)

    def _radius(self, t):
        r = np.full_like(t, self.radius)
        z = np.zeros_like(t)
        return r, z, z

    def describe(self) -> str:
        return f"circle(center_height={self.center_height:.17g}, radius={self.radius:.17g})"

    def vp_sign_breakpoints(self):
        return np.array([0.0, np.pi])


class Ellipse(GeneratingCurve):
    kind = "ellipse"

    def __init__(self, center_height: float, semi_axis_x: float, semi_axis_y: float):
        if semi_axis_x <= 0.0 or semi_axis_y <= 0.0:
            raise GeometryError("semi-axes must be positive")
        if center_height <= semi_axis_y:
            raise GeometryError("ellipse must stay above the axis")
        self.center_height = float(center_height)
        self.semi_axis_x = float(semi_axis_x)
        self.semi_axis_y = float(semi_axis_y)

    def frame(self, t):
        a, c, y0 = self.semi_axis_x, self.semi_axis_y, self.center_height
        ct, st = np.cos(t), np.sin(t)
        x, y = a * ct, y0 + c * st
        xp, yp = -a * st, c * ct
        speed = np.hypot(xp, yp)
        curvature = a * c / speed**3
        return dict(x=x, y=y, xp=xp, yp=yp, speed=speed, curvature=curvature)

    def describe(self) -> str:
        return (f"ellipse(center_height={self.center_height:.17g}, "
                f"semi_axis_x={self.semi_axis_x:.17g}, semi_axis_y={self.semi_axis_y:.17g})")

    def vp_sign_breakpoints(self):
        return np.array([0.0, np.pi])


class FourierStar(_RadialCurve):
    """Smooth radial perturbation r(t) = R (1 + sum c_j cos jt + s_j sin jt)."""

    kind = "fourier_star"

    def __init__(self, center_height: float, base_radius: float,
                 cos_coeffs: dict | None = None, sin_coeffs: dict | None = None):
        if base_radius <= 0.0:
            raise GeometryError("base_radius must be positive")
        self.center_height = float(center_height)
        self.base_radius = float(base_radius)
        self.cos_coeffs = {int(k): float(v) for k, v in (cos_coeffs or {}).items()}
        self.sin_coeffs = {int(k): float(v) for k, v in (sin_coeffs or {}).items()}
        if any(j < 1 for j in list(self.cos_coeffs) + list(self.sin_coeffs)):
            raise GeometryError("harmonic indices must be >= 1")
        self.validate()

    def _radius(self, t):
        r = np.ones_like(t)
        rp = np.zeros_like(t)
        rpp = np.zeros_like(t)
        for j, cj in self.cos_coeffs.items():
            r += cj * np.cos(j * t)
            rp += -cj * j * np.sin(j * t)
            rpp += -cj * j * j * np.cos(j * t)
        for j, sj in self.sin_coeffs.items():
            r += sj * np.sin(j * t)
            rp += sj * j * np.cos(j * t)
            rpp += -sj * j * j * np.sin(j * t)
        R = self.base_radius
        return R * r, R * rp, R * rpp

    def describe(self) -> str:
        cc = ",".join(f"{j}:{v:.17g}" for j, v in sorted(self.cos_coeffs.items()))
        sc = ",".join(f"{j}:{v:.17g}" for j, v in sorted(self.sin_coeffs.items()))
        return (f"fourier_star(center_height={self.center_height:.17g}, "
                f"base_radius={self.base_radius:.17g}, cos=[{cc}], sin=[{sc}])")


class HolderStar(_RadialCurve):
    """Radial curve with a single |sin(t/2)|^(1+alpha) bump.

    The bump keeps the boundary C^1 with a Holder-alpha first derivative
    at t = 0, the reduced-regularity instance of the catalog.  Nodes are
    offset by half a step so the parametrization is evaluated away from
    the non-smooth point.
    """

    kind = "holder_star"
    offset_nodes = True

    def __init__(self, center_height: float, base_radius: float,
                 amplitude: float, alpha: float):
        if not 0.0 < alpha < 1.0:
            raise GeometryError("alpha must lie in (0, 1)")
        if base_radius <= 0.0:
            raise GeometryError("base_radius must be positive")
        self.center_height = float(center_height)
        self.base_radius = float(base_radius)
        self.amplitude = float(amplitude)
        self.alpha = float(alpha)
        self.regularity = "c1alpha"
        self.validate()

    def _radius(self, t):
        R, amp, al = self.base_radius, self.amplitude, self.alpha
        raw_s, c = np.sin(0.5 * t), np.cos(0.5 * t)
        s = np.abs(raw_s)
        sgn = np.sign(raw_s)  # keeps the frame 2 pi-periodic for any t
        bump = s ** (1.0 + al)
        r = R * (1.0 + amp * bump)
        rp = R * amp * 0.5 * (1.0 + al) * s**al * sgn * c
        rpp = R * amp * 0.25 * (1.0 + al) * np.where(
            s > 0.0, al * s ** (al - 1.0) * c * c - s ** (1.0 + al), 0.0)
        return r, rp, rpp

    def describe(self) -> str:
        return (f"holder_star(center_height={self.center_height:.17g}, "
                f"base_radius={self.base_radius:.17g}, amplitude={self.amplitude:.17g}, "
                f"alpha={self.alpha:.17g})")


class CurvilinearPolygon(GeneratingCurve):
    """Closed polygon with straight edges and a graded parametrization.

    Each edge occupies an equal parameter interval; within an edge the
    local parameter runs through the grading map u^q / (u^q + (1-u)^q),
    whose derivative vanishes to order q-1 at both endpoints.  That
    concentrates nodes near the vertices and sends the parametrization
    speed to zero there, which is what lets the global quadrature rules
    survive the corner singularities (at reduced order).
    """

    kind = "curvilinear_polygon"
    regularity = "lipschitz_with_corners"
    offset_nodes = True

    def __init__(self, vertices, grading: int = 3):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise GeometryError("vertices must be an (m, 2) array with m >= 3")
        if grading < 2:
            raise GeometryError("grading exponent must be >= 2")
        self.vertices = v
        self.grading = int(grading)
        m = len(v)
        area = 0.5 * np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1])
        if area <= 0.0:
            raise GeometryError("vertices must be in counterclockwise order")
        self.corner_params = tuple(2.0 * np.pi * np.arange(m) / m)
        angles = []
        for i in range(m):
            din = v[i] - v[i - 1]
            dout = v[(i + 1) % m] - v[i]
            turn = math.atan2(din[0] * dout[1] - din[1] * dout[0], din @ dout)
            angles.append(math.pi - turn)
        self.corner_angles = tuple(angles)
        self.validate()

    def frame(self, t):
        m = len(self.vertices)
        q = self.grading
        scale = 2.0 * np.pi / m
        t = np.mod(t, 2.0 * np.pi)
        side = np.minimum((t / scale).astype(int), m - 1)
        u = t / scale - side
        a = u**q
        b = (1.0 - u) ** q
        w = a / (a + b)
        wp = q * u ** (q - 1) * (1.0 - u) ** (q - 1) / (a + b) ** 2
        v0 = self.vertices[side]
        v1 = self.vertices[(side + 1) % m]
        edge = v1 - v0
        x = v0[:, 0] + w * edge[:, 0]
        y = v0[:, 1] + w * edge[:, 1]
        xp = edge[:, 0] * wp / scale
        yp = edge[:, 1] * wp / scale
        speed = np.hypot(xp, yp)
        return dict(x=x, y=y, xp=xp, yp=yp, speed=speed,
                    curvature=np.zeros_like(t))

    def describe(self) -> str:
        vs = ";".join(f"{p[0]:.17g},{p[1]:.17g}" for p in self.vertices)
        return f"curvilinear_polygon(vertices=[{vs}], grading={self.grading})"

    def vp_sign_breakpoints(self):
        return np.asarray(self.corner_params)


def rounded_square(center_height: float = 2.0, half_width: float = 0.8,
                   grading: int = 3) -> CurvilinearPolygon:
    """Square generator with four right-angle corners (torus with edges)."""
    h = float(half_width)
    y0 = float(center_height)
    if y0 <= h:
        raise GeometryError("square must stay above the axis (center_height > half_width)")
    verts = [(h, y0 - h), (h, y0 + h), (-h, y0 + h), (-h, y0 - h)]
    return CurvilinearPolygon(verts, grading=grading)


def sample_curve(curve: GeneratingCurve, n: int) -> CurveSamples:
    """Quadrature samples at n uniformly spaced parameter nodes.

    Smooth curves use the plain grid t_j = 2 pi j / n; curves with
    corners or isolated non-smooth points shift by half a step so no
    node lands where the frame is undefined.
    """
    if n < 8 or n % 2 != 0:
        raise GeometryError("n must be an even integer >= 8")
    curve.validate()
    shift = 0.5 if curve.offset_nodes else 0.0
    t = 2.0 * np.pi * (np.arange(n) + shift) / n
    fr = curve.frame(t)
    speed = fr["speed"]
    if np.any(speed <= 0.0):
        raise GeometryError("parametrization speed vanished at a node")
    tx = fr["xp"] / speed
    ty = fr["yp"] / speed
    weight = np.full(n, 2.0 * np.pi / n)
    return CurveSamples(curve, t, fr["x"], fr["y"], tx, ty, speed,
                        fr["curvature"], weight)


def hyperbolic_area_over_4pi(curve: GeneratingCurve, n: int = 512) -> float:
    """(1/4 pi) * contour integral of dx / y over the generating curve.

    By Stokes this equals the enclosed area in the hyperbolic half-plane
    metric divided by 4 pi.  For the circle generator it has the closed
    form (b / sqrt(b^2 - a^2) - 1) / 2.
    """
    s = sample_curve(curve, n)
    return float(np.sum(s.vp * s.speed / s.y) * (2.0 * np.pi / n) / (4.0 * np.pi))
