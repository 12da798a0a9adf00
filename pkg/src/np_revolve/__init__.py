"""Spectra of the Neumann-Poincare operator restricted to axially
symmetric densities on surfaces of revolution.

The pipeline: describe a generating curve in the half-plane y > 0
(:mod:`geometry`), evaluate the reduced mode kernels through elliptic
integrals (:mod:`special`, :mod:`kernel`), assemble dense Nystrom
matrices with a periodic log-quadrature rule (:mod:`discretize`),
symmetrize in the single-layer inner product and solve (:mod:`spectral`),
then compare against the predicted eigenvalue asymptotics
(:mod:`asymptotics`) or corner essential-spectrum bounds (:mod:`corners`).
"""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoticsReport,
    build_report,
    decay_exponent,
    fit_weyl,
    weyl_constant_total,
    weyl_constants,
)
from .corners import CornerPrediction, clustering_diagnostic, essential_bound
from .discretize import (
    KernelMatrix,
    assemble_for_curve,
    assemble_mode0_np,
    assemble_mode0_parts,
    assemble_mode0_single_layer,
    assemble_planar_np,
    assemble_remainder,
    dump_matrix,
    load_matrix,
    log_quadrature_weights,
)
from .errors import (
    ConfigError,
    DomainError,
    GeometryError,
    NPRevolveError,
    NumericalError,
    SingularEvaluationError,
)
from .geometry import (
    Circle,
    CurveSample,
    CurveSamples,
    CurvilinearPolygon,
    Ellipse,
    FourierStar,
    GeneratingCurve,
    HolderStar,
    hyperbolic_area_over_4pi,
    rounded_square,
    sample_curve,
    scaled_distance,
)
from .kernel import (
    KernelSplit,
    mode0_np_kernel,
    mode0_np_split,
    mode0_single_layer_kernel,
    mode_np_kernel,
    mode_np_kernel_reduced,
    mode_single_layer_kernel,
    planar_np_kernel,
    remainder_kernel,
)
from .special import (
    EllipticPair,
    azimuthal_moments0,
    azimuthal_moments_quad,
    digamma_seq,
    e_inversion_series,
    ellip_e_imag,
    ellip_k_imag,
    ellip_pair_imag,
    k_inversion_series,
)
from .spectral import (
    SpectrumResult,
    compute_spectrum,
    direct_spectrum,
    eigen_spectrum,
    symmetrize,
)
