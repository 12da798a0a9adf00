"""Dense Nystrom assembly with a periodic log-quadrature rule.

The zeroth-mode NP kernel and the mode-0 single-layer kernel both carry
a logarithmic diagonal singularity.  On a 2 pi-periodic grid we write
every such kernel as

    k(t, s) = a(t, s) log(4 sin^2((t - s)/2)) + b(t, s)

with smooth periodic a and b, and integrate the log factor with the
classical trapezoid-type weights that are exact for trigonometric
polynomials (Martensen/Kussmaul, Kress).  The essential point is that
the full log content of the mode-0 kernels is known analytically: the
coefficient of log(delta) is analytic in delta^2, so a(t, s) is globally
smooth and eigenvalues converge super-algebraically for smooth curves.

The assembled ``entries`` matrices act as quadrature kernels: applying
the operator to nodal values f is ``entries @ (weights * f)``, i.e. the
node weights stay factored out.  This keeps the single-layer matrix
symmetric, which the spectral module relies on.

Curves with corners reuse the same machinery on their graded
parametrization.  Accuracy drops to an algebraic order set by the
grading exponent, which is flagged via ``KernelMatrix.lower_order``;
those matrices feed the corner diagnostics, not convergence claims.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import GeometryError, NumericalError
from .geometry import CurveSamples, sample_curve, GeneratingCurve
from .kernel import LOG_FREE_B0_CONST, NEAR_DIAGONAL_DELTA
from . import special

KINDS = ("np_mode0", "single_layer_mode0", "remainder", "np_planar")
_KIND_CODES = {k: i + 1 for i, k in enumerate(KINDS)}
_CODE_KINDS = {v: k for k, v in _KIND_CODES.items()}

_MAGIC = b"NPRV"
_FORMAT_VERSION = 1


@dataclass
class KernelMatrix:
    """Quadrature-kernel matrix plus its node weights.

    ``entries[i, j]`` approximates the kernel against node j such that
    (operator f)(t_i) ~= sum_j entries[i, j] * weights[j] * f[j]; for the
    purely smooth parts the entries are plain kernel values.
    """

    entries: np.ndarray
    weights: np.ndarray
    kind: str
    n: int
    curve_id: str
    curve_hash: bytes
    lower_order: bool = False

    def operator_matrix(self) -> np.ndarray:
        """Matrix acting on nodal values (weights folded in)."""
        return self.entries * self.weights[None, :]


def log_quadrature_weights(n: int) -> np.ndarray:
    """n x n weight matrix R for the periodic log factor.

    Row i approximates int_0^{2pi} log(4 sin^2((t_i - s)/2)) F(s) ds by
    sum_j R[i, j] F(s_j); exact for trigonometric polynomials F of
    degree < n/2 (and the n/2 mode with halved weight).  The log factor
    has zero mean, so all row sums vanish.
    """
    if n < 8 or n % 2 != 0:
        raise NumericalError("log quadrature rule needs even n >= 8")
    m = n // 2
    theta = 2.0 * np.pi * np.arange(n) / n
    ks = np.arange(1, m)
    row = -(2.0 * np.pi / m) * (np.cos(np.outer(ks, theta)) / ks[:, None]).sum(axis=0)
    row -= (np.pi / m**2) * np.cos(m * theta)
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return row[idx]


class _AssemblyContext:
    """Shared pairwise geometry and elliptic evaluations for one grid."""

    def __init__(self, samples: CurveSamples):
        n = len(samples)
        self.samples = samples
        self.n = n
        self.ii = np.arange(n)
        t = samples.t
        x, y = samples.x, samples.y
        dx = x[:, None] - x[None, :]
        dy = y[:, None] - y[None, :]
        self.r2 = dx * dx + dy * dy
        off = ~np.eye(n, dtype=bool)
        if np.any(self.r2[off] == 0.0):
            raise GeometryError("coincident nodes: curve is not simple at this resolution")
        self.yy = y[:, None] * y[None, :]
        d2 = self.r2 / (4.0 * self.yy)
        d2[self.ii, self.ii] = 1.0  # placeholder, diagonal handled analytically
        self.d2 = d2
        self.delta = np.sqrt(d2)
        fs = 4.0 * np.sin(0.5 * (t[:, None] - t[None, :])) ** 2
        fs[self.ii, self.ii] = 1.0
        self.fs = fs
        self.logfs = np.log(fs)
        self.c = samples.vp / (4.0 * np.pi * y)
        self.near = self.delta < NEAR_DIAGONAL_DELTA
        self.near[self.ii, self.ii] = False
        self._planar = None
        self._elliptic = None
        self._logcoeffs = None
        self._rlog = None

    # cached pieces ----------------------------------------------------
    @property
    def rlog(self) -> np.ndarray:
        if self._rlog is None:
            self._rlog = log_quadrature_weights(self.n)
        return self._rlog

    @property
    def planar(self) -> np.ndarray:
        """Planar NP kernel values, diagonal = curvature/(4 pi)."""
        if self._planar is None:
            s = self.samples
            num = (s.x[:, None] - s.x[None, :]) * s.nx[:, None] \
                + (s.y[:, None] - s.y[None, :]) * s.ny[:, None]
            with np.errstate(divide="ignore", invalid="ignore"):
                k = num / self.r2 / (2.0 * np.pi)
            k[self.ii, self.ii] = s.curvature / (4.0 * np.pi)
            self._planar = k
        return self._planar

    def elliptic(self):
        """(a0, b0) moment matrices from the closed elliptic forms."""
        if self._elliptic is None:
            ki, ei = special._agm_ke_imag(1.0 / self.delta)
            a0 = self.delta * ei / (1.0 + self.d2)
            b0 = ki / self.delta - a0
            self._elliptic = (a0, b0)
        return self._elliptic

    def log_coefficients(self):
        """(hA, 1 + hB) log-coefficient matrices, stable for all delta."""
        if self._logcoeffs is None:
            self._logcoeffs = (
                special.a0_log_coefficient(self.delta),
                special.one_plus_b0_log_coefficient(self.delta),
            )
        return self._logcoeffs


def _kernel_matrix(ctx, entries, kind) -> KernelMatrix:
    s = ctx.samples
    return KernelMatrix(
        entries=entries,
        weights=s.quad_weights.copy(),
        kind=kind,
        n=ctx.n,
        curve_id=s.curve.curve_id(),
        curve_hash=s.curve.curve_hash(),
        lower_order=not s.curve.is_smooth,
    )


def assemble_planar_np(samples: CurveSamples, ctx: _AssemblyContext | None = None) -> KernelMatrix:
    """Planar NP kernel block (smooth for smooth curves; trapezoid rule)."""
    ctx = ctx or _AssemblyContext(samples)
    return _kernel_matrix(ctx, ctx.planar.copy(), "np_planar")


def _log_part_entries(ctx: _AssemblyContext) -> np.ndarray:
    """Entries for c(t) log|p - q| handled by the periodic log rule."""
    n, ii = ctx.n, ctx.ii
    s = ctx.samples
    a = 0.5 * ctx.c[:, None] * np.ones((n, n))
    with np.errstate(divide="ignore", invalid="ignore"):
        b = 0.5 * ctx.c[:, None] * np.log(ctx.r2 / ctx.fs)
    b[ii, ii] = ctx.c * np.log(s.speed)
    return a * ctx.rlog * (n / (2.0 * np.pi)) + b


def _remainder_star(ctx: _AssemblyContext):
    """Remainder kernel values R*(t_i, s_j) and its log-rule coefficient."""
    ii = ctx.ii
    s = ctx.samples
    c = ctx.c[:, None]
    kst = ctx.planar
    ha, one_hb = ctx.log_coefficients()
    a_r = 0.5 * (kst * ha - c * one_hb)
    a_r[ii, ii] = 0.0

    a0, b0 = ctx.elliptic()
    with np.errstate(divide="ignore", invalid="ignore"):
        log_pq = 0.5 * np.log(ctx.r2)
        rstar = kst * a0 - c * b0 - kst - c * log_pq

    near = ctx.near
    if np.any(near):
        d2n = ctx.d2[near]
        g = special.e_inversion_series_arr(d2n)
        f = special.k_inversion_series_arr(d2n)
        kst_n = kst[near]
        c_n = (c * np.ones_like(kst))[near]
        p_minus_k = kst_n * d2n * (g - 1.0) / (1.0 + d2n) - c_n * (
            LOG_FREE_B0_CONST + d2n * (f - (g - 1.0) / (1.0 + d2n)))
        log2syy = 0.5 * np.log(4.0 * ctx.yy[near])
        rstar[near] = p_minus_k - c_n * log2syy + 2.0 * a_r[near] * 0.5 * np.log(d2n)
        b_near = p_minus_k - c_n * log2syy + a_r[near] * np.log(d2n / ctx.fs[near])
    rdiag = -ctx.c * (LOG_FREE_B0_CONST + np.log(2.0 * s.y))
    rstar[ii, ii] = rdiag

    b_r = rstar - a_r * ctx.logfs
    if np.any(near):
        b_r[near] = b_near
    b_r[ii, ii] = rdiag
    return rstar, a_r, b_r


def assemble_remainder(samples: CurveSamples, ctx: _AssemblyContext | None = None) -> KernelMatrix:
    """Remainder block with its own (weak) log split; bounded diagonal."""
    ctx = ctx or _AssemblyContext(samples)
    _, a_r, b_r = _remainder_star(ctx)
    entries = a_r * ctx.rlog * (ctx.n / (2.0 * np.pi)) + b_r
    return _kernel_matrix(ctx, entries, "remainder")


def assemble_mode0_parts(samples: CurveSamples, ctx: _AssemblyContext | None = None) -> dict:
    """All three blocks of the mode-0 NP matrix plus their exact sum.

    Keys: ``planar``, ``log_part`` (raw entries), ``remainder``,
    ``mode0``.  The sum identity mode0 = planar + log_part + remainder
    holds entrywise by construction.
    """
    ctx = ctx or _AssemblyContext(samples)
    planar = assemble_planar_np(samples, ctx)
    log_part = _log_part_entries(ctx)
    remainder = assemble_remainder(samples, ctx)
    mode0 = planar.entries + log_part + remainder.entries
    return {
        "planar": planar,
        "log_part": log_part,
        "remainder": remainder,
        "mode0": _kernel_matrix(ctx, mode0, "np_mode0"),
    }


def assemble_mode0_np(samples: CurveSamples, ctx: _AssemblyContext | None = None) -> KernelMatrix:
    """Nystrom matrix of the zeroth-mode NP operator."""
    return assemble_mode0_parts(samples, ctx)["mode0"]


def assemble_mode0_single_layer(samples: CurveSamples,
                                ctx: _AssemblyContext | None = None,
                                check_positive: bool = True) -> KernelMatrix:
    """Nystrom matrix of the zeroth-mode single-layer operator.

    The symmetrically weighted matrix W^(1/2) (-entries) W^(1/2) must be
    positive definite (it discretizes the inner product that makes the
    mode operator self-adjoint); this is verified via Cholesky unless
    ``check_positive`` is disabled.
    """
    ctx = ctx or _AssemblyContext(samples)
    n, ii = ctx.n, ctx.ii
    s = ctx.samples
    ki_d, _ = special._agm_ke_imag(ctx.delta)
    a_s = ki_d / (2.0 * np.pi**2)
    a_s[ii, ii] = 1.0 / (4.0 * np.pi)  # K(i 0)/(2 pi^2)

    ki_inv, _ = special._agm_ke_imag(1.0 / ctx.delta)
    s0raw = -ki_inv / (2.0 * np.pi * ctx.delta)
    b_s = s0raw - a_s * ctx.logfs
    near = ctx.near
    if np.any(near):
        d2n = ctx.d2[near]
        f = special.k_inversion_series_arr(d2n)
        b_s[near] = (a_s[near] * np.log(d2n / ctx.fs[near])
                     - math.log(2.0) / np.pi - d2n * f / (2.0 * np.pi))
    b_s[ii, ii] = np.log(s.speed / (2.0 * s.y)) / (2.0 * np.pi) - math.log(2.0) / np.pi

    entries = a_s * ctx.rlog * (n / (2.0 * np.pi)) + b_s
    km = _kernel_matrix(ctx, entries, "single_layer_mode0")
    if check_positive:
        sw = np.sqrt(km.weights)
        gram = sw[:, None] * (-km.entries) * sw[None, :]
        try:
            np.linalg.cholesky(0.5 * (gram + gram.T))
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                "weighted single-layer matrix is not positive definite; "
                "discretization failed"
            ) from exc
    return km


def assemble_operator_pair(samples: CurveSamples) -> tuple[KernelMatrix, KernelMatrix]:
    """Mode-0 NP and single-layer matrices sharing one geometry pass."""
    ctx = _AssemblyContext(samples)
    k0 = assemble_mode0_np(samples, ctx)
    s0 = assemble_mode0_single_layer(samples, ctx)
    return k0, s0


def assemble_for_curve(curve: GeneratingCurve, n: int) -> tuple[KernelMatrix, KernelMatrix]:
    """Convenience: sample the curve and assemble both operator matrices."""
    return assemble_operator_pair(sample_curve(curve, n))


# ---------------------------------------------------------------------------
# binary dump format (see README for the layout)
# ---------------------------------------------------------------------------

def dump_matrix(km: KernelMatrix, path) -> None:
    """Write a KernelMatrix: header, row-major float64 entries, weights."""
    header = _MAGIC + struct.pack("<III", _FORMAT_VERSION, km.n, _KIND_CODES[km.kind])
    header += km.curve_hash[:8].ljust(8, b"\0")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(km.entries, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(km.weights, dtype="<f8").tobytes())


def load_matrix(path) -> KernelMatrix:
    """Read back a matrix written by :func:`dump_matrix`."""
    raw = Path(path).read_bytes()
    if raw[:4] != _MAGIC:
        raise NumericalError(f"{path}: not a kernel matrix dump (bad magic)")
    version, n, code = struct.unpack("<III", raw[4:16])
    if version != _FORMAT_VERSION:
        raise NumericalError(f"{path}: unsupported format version {version}")
    if code not in _CODE_KINDS:
        raise NumericalError(f"{path}: unknown kind code {code}")
    curve_hash = raw[16:24]
    body = np.frombuffer(raw[24:], dtype="<f8")
    if body.size != n * n + n:
        raise NumericalError(f"{path}: truncated payload")
    entries = body[: n * n].reshape(n, n).copy()
    weights = body[n * n:].copy()
    return KernelMatrix(entries=entries, weights=weights, kind=_CODE_KINDS[code],
                        n=n, curve_id="", curve_hash=curve_hash)
