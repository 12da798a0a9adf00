"""Matplotlib figures rendered next to the delimited output files.

All figures go through the Agg backend straight to PNG; nothing here is
interactive.  The CSV/JSON artifacts remain the authoritative output,
figures are a convenience for eyeballing runs.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_curve(samples, path) -> None:
    """Generating curve with a few outward normals."""
    fig, ax = plt.subplots(figsize=(5, 5))
    x = np.append(samples.x, samples.x[0])
    y = np.append(samples.y, samples.y[0])
    ax.plot(x, y, "-", lw=1.2, color="tab:blue")
    step = max(1, len(samples) // 32)
    sl = slice(0, len(samples), step)
    ax.quiver(samples.x[sl], samples.y[sl], samples.nx[sl], samples.ny[sl],
              scale=25, width=3e-3, color="tab:gray")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(samples.curve.kind)
    _save(fig, path)


def plot_spectrum(spectrum, path) -> None:
    """|eig_j| vs j on log-log axes, split by sign."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    jp = np.arange(1, len(spectrum.pos_eigs) + 1)
    jm = np.arange(1, len(spectrum.neg_eigs) + 1)
    ax.loglog(jp, spectrum.pos_eigs, ".", ms=4, label="positive")
    ax.loglog(jm, spectrum.neg_eigs, ".", ms=4, label="negative (magnitude)")
    if len(jp) > 2:
        ax.loglog(jp, spectrum.pos_eigs[0] / jp, "k--", lw=0.8, label="~1/j")
    ax.set_xlabel("j")
    ax.set_ylabel("|eigenvalue|")
    ax.set_title(f"n={spectrum.n}, route={spectrum.route}")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    _save(fig, path)


def plot_weyl_fit(spectrum, report, path) -> None:
    """j * eig_j against j with the quadrature constants overlaid."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    m = min(len(spectrum.pos_eigs), len(spectrum.neg_eigs))
    j = np.arange(1, m + 1)
    ax.plot(j, j * spectrum.pos_eigs[:m], ".", ms=4, label="j * eig_j (+)")
    ax.plot(j, j * spectrum.neg_eigs[:m], ".", ms=4, label="j * eig_j (-)")
    ax.axhline(report.c0_plus, color="tab:blue", lw=1, ls="--", label="c0+ quadrature")
    ax.axhline(report.c0_minus, color="tab:orange", lw=1, ls="--", label="c0- quadrature")
    if report.fit is not None:
        lo, hi = report.fit.window
        ax.axvspan(lo, hi, color="k", alpha=0.08, label="fit window")
    ax.set_xlim(1, m)
    ax.set_xlabel("j")
    ax.set_ylabel("j * eigenvalue")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    _save(fig, path)


def plot_convergence(spectra, path, max_rank: int = 40) -> None:
    """Eigenvalue drift against the finest grid, per coarser grid."""
    spectra = sorted(spectra, key=lambda s: s.n)
    ref = spectra[-1]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for s in spectra[:-1]:
        m = min(max_rank, len(s.all_eigs), len(ref.all_eigs))
        j = np.arange(1, m + 1)
        diff = np.abs(np.abs(s.all_eigs[:m]) - np.abs(ref.all_eigs[:m]))
        ax.semilogy(j, np.maximum(diff, 1e-18), ".-", ms=3, lw=0.8,
                    label=f"n={s.n} vs n={ref.n}")
    ax.set_xlabel("j")
    ax.set_ylabel("| |eig_j(n)| - |eig_j(n_max)| |")
    ax.legend()
    ax.grid(alpha=0.3)
    _save(fig, path)


def plot_clustering(report, path) -> None:
    """Per-bin counts over [-b, b] for each grid size."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if report.prediction.b > 0:
        centers = 0.5 * (report.bin_edges[:-1] + report.bin_edges[1:])
        width = (report.bin_edges[1] - report.bin_edges[0]) * 0.9
        m = len(report.grid_sizes)
        for i, n in enumerate(report.grid_sizes):
            ax.bar(centers + (i - m / 2) * width / m, report.counts[i],
                   width=width / m, label=f"n={n}")
        ax.axvline(-report.prediction.b, color="k", lw=1, ls="--")
        ax.axvline(report.prediction.b, color="k", lw=1, ls="--")
        ax.set_xlabel("eigenvalue")
        ax.set_ylabel("count per bin")
        ax.legend()
    else:
        ax.plot(report.grid_sizes, report.control_band_counts, "o-",
                label="control band count")
        ax.set_xlabel("n")
        ax.set_ylabel("count in control modulus band")
        ax.legend()
    ax.grid(alpha=0.3)
    _save(fig, path)
