"""Sampling recovery of functions in Gaussian Sobolev spaces.

Two linear algorithms using ``n`` point evaluations: truncated trigonometric
interpolation (FFT-built) and interval-partitioned Matérn spline smoothing,
plus the Gaussian-weighted error oracle used to measure them.
"""

from .error_metrics import (
    ConvergenceReport,
    QuadratureConfig,
    decay_norm_estimate,
    fit_rate,
    sobolev_norm,
    tail_bound,
    weighted_lp_error,
)
from .functions import TestFunction, corpus_lookup
from .periodization_diag import AuxiliaryG, build_auxiliary_G, check_boundary_matching
from .special_functions import MaternKernel, matern_phi
from .spline_approx import (
    SingularSystemError,
    SplineApproximant,
    allocate_points,
    build_spline_approximant,
    evaluate_spline,
    evaluate_spline_weighted,
)
from .trig_interp import (
    ApproximationParams,
    TrigInterpolant,
    build_trig_interpolant,
    evaluate_trig,
    evaluate_trig_weighted,
    select_T,
    select_T_alpha_free,
)

__version__ = "0.1.0"
