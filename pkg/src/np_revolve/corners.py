"""Essential-spectrum prediction for corner curves and clustering diagnostics.

A curvilinear-polygon section with interior angles alpha_i puts the
interval [-b, b], b = max_i |1/2 - alpha_i/(2 pi)|, inside the essential
spectrum of the revolved operator.  A finite matrix cannot converge to
an essential spectrum, so this module deliberately reports only a
qualitative signature: eigenvalue counts in subintervals of [-b, b]
should keep growing as the grid is refined, whereas for a smooth control
curve the counts away from zero freeze once the eigenvalues converge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .spectral import SpectrumResult

DEFAULT_BINS = 20
DEFAULT_MARGIN = 0.02
# every compact-like spectrum piles up at 0, so bins this close to zero
# carry no corner signal and are excluded from the growth summary
DEFAULT_ZERO_EXCLUSION = 0.05

# band used for the smooth-control stabilization check
CONTROL_BAND = (0.05, 0.2)


@dataclass(frozen=True)
class CornerPrediction:
    """Corner angles with the predicted essential-spectrum bound."""

    angles: tuple
    b: float

    @property
    def predicted_interval(self) -> tuple[float, float]:
        return (-self.b, self.b)


def essential_bound(angles) -> CornerPrediction:
    """b = max over interior angles of |1/2 - angle/(2 pi)|."""
    angles = tuple(float(a) for a in angles)
    if not angles:
        raise DomainError("at least one interior angle is required")
    for a in angles:
        if not 0.0 < a < 2.0 * math.pi:
            raise DomainError(f"interior angle {a} outside (0, 2 pi)")
    b = max(abs(0.5 - a / (2.0 * math.pi)) for a in angles)
    return CornerPrediction(angles=angles, b=b)


@dataclass
class ClusteringReport:
    """Per-bin eigenvalue counts across grid sizes with growth flags."""

    prediction: CornerPrediction
    grid_sizes: list
    bin_edges: np.ndarray
    counts: np.ndarray            # shape (num_n, num_bins)
    bin_monotone: np.ndarray      # per bin: counts nondecreasing in n
    interior_counts: list         # counts in [-b+eta, b-eta] minus zero band
    interior_monotone: bool       # strictly increasing across grid sizes
    control_band_counts: list     # counts with modulus in CONTROL_BAND
    control_band_stable: bool     # last two grid sizes agree
    margin: float
    zero_exclusion: float

    def to_dict(self) -> dict:
        return {
            "b": self.prediction.b,
            "angles": list(self.prediction.angles),
            "predicted_interval": list(self.prediction.predicted_interval),
            "grid_sizes": [int(n) for n in self.grid_sizes],
            "margin": self.margin,
            "zero_exclusion": self.zero_exclusion,
            "bin_edges": [float(v) for v in self.bin_edges],
            "counts": [[int(c) for c in row] for row in self.counts],
            "bin_monotone": [bool(v) for v in self.bin_monotone],
            "interior_counts": [int(c) for c in self.interior_counts],
            "interior_monotone": self.interior_monotone,
            "control_band": list(CONTROL_BAND),
            "control_band_counts": [int(c) for c in self.control_band_counts],
            "control_band_stable": self.control_band_stable,
        }


def count_in_band(spectrum: SpectrumResult, lo: float, hi: float) -> int:
    """Eigenvalues (by modulus) inside [lo, hi], both signs."""
    mags = np.abs(spectrum.all_eigs)
    return int(np.sum((mags >= lo) & (mags <= hi)))


def clustering_diagnostic(spectra, prediction: CornerPrediction,
                          bins: int = DEFAULT_BINS,
                          margin: float = DEFAULT_MARGIN,
                          zero_exclusion: float = DEFAULT_ZERO_EXCLUSION) -> ClusteringReport:
    """Histogram eigenvalues of successive refinements over [-b, b].

    Needs at least three spectra of the same curve with increasing grid
    size.  ``interior_counts`` counts eigenvalues in [-b+margin,
    b-margin] whose modulus exceeds ``zero_exclusion``; monotone growth
    of that count is the qualitative signature of non-trivial essential
    spectrum.  For b = 0 the interval is empty and the report reduces to
    the control-band stabilization check.
    """
    spectra = list(spectra)
    if len(spectra) < 3:
        raise DomainError("clustering diagnostic needs at least 3 grid sizes")
    ns = [s.n for s in spectra]
    if ns != sorted(ns) or len(set(ns)) != len(ns):
        raise DomainError("spectra must come in strictly increasing grid size")
    ids = {s.curve_id for s in spectra}
    if len(ids) != 1:
        raise DomainError(f"spectra come from different curves: {sorted(ids)}")

    b = prediction.b
    edges = np.linspace(-b, b, bins + 1) if b > 0.0 else np.zeros(1)
    counts = np.zeros((len(spectra), max(bins, 1)), dtype=int)
    interior = []
    control = []
    lo, hi = -b + margin, b - margin
    for i, s in enumerate(spectra):
        eigs = s.all_eigs
        if b > 0.0:
            counts[i], _ = np.histogram(eigs, bins=edges)
        inside = (eigs >= lo) & (eigs <= hi) & (np.abs(eigs) >= zero_exclusion) \
            if hi > lo else np.zeros_like(eigs, dtype=bool)
        interior.append(int(np.sum(inside)))
        control.append(count_in_band(s, *CONTROL_BAND))
    bin_monotone = np.all(np.diff(counts, axis=0) >= 0, axis=0)
    interior_monotone = all(b2 > b1 for b1, b2 in zip(interior, interior[1:]))
    control_stable = control[-1] == control[-2]
    return ClusteringReport(
        prediction=prediction,
        grid_sizes=ns,
        bin_edges=edges,
        counts=counts,
        bin_monotone=bin_monotone,
        interior_counts=interior,
        interior_monotone=interior_monotone,
        control_band_counts=control,
        control_band_stable=control_stable,
        margin=margin,
        zero_exclusion=zero_exclusion,
    )
