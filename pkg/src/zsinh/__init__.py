"""Accelerated inverse Z-transform and Wiener-Hopf factorization toolkit."""

from .contours import (
    LogContour,
    SinhContour,
    StripImage,
    admissible_rpm,
    arc_length_in_unit_disc,
    fit_sinh_to_interval,
    log_map,
    log_map_derivative,
    origin_distance,
    sinh_map,
    sinh_map_derivative,
    small_angle_params,
    strip_image,
)
from .errors import DomainError, NumericalError
from .functions import (
    AnalyticFunction,
    AnalyticityDescriptor,
    Kind,
    PSDSpec,
    atom_mixture,
    kobol_mgf,
    nts_mgf,
    rational_psd,
    select_rotation,
)
from .invz import (
    InversionReport,
    QuadratureGrid,
    applicable_methods,
    invert,
    log_invert,
    log_select_params,
    moment_batch,
    sinh1_invert,
    sinh1_select_params,
    sinh2_invert,
    sinh2_select_params,
    sinh3_invert,
    sinh3_select_params,
    step_from_hardy,
    trapezoid_error_bound,
    trapezoid_invert,
    trapezoid_node_estimate,
    truncation_lambda,
)
from .oracle import OracleResult, binomial_series_h, circle_coefficient, trapezoid_oracle
from .wienerhopf import (
    Factorization,
    H_factors,
    compute_d,
    factorize,
    impulse_response,
    ln_A_minus,
    reference_impulse_response,
    regularized_A,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
