"""Critical-point statistics of smooth stationary isotropic planar Gaussian fields.

Closed-form first- and second-order theory (intensity, repulsion factor,
small-ball asymptotics), spectral Monte-Carlo simulation with analytic
derivatives, a Newton-based critical-point finder, empirical estimators,
and an exact-conditioning numeric Kac-Rice engine for 1- and 2-point
correlation functions of critical points by type.
"""

from .estimators import (
    MomentEstimate,
    ScalingFit,
    default_window,
    estimate_intensity,
    estimate_intensity_by_kind,
    estimate_second_factorial,
    fit_scaling,
    poisson_control_ratio,
    repulsion_ratio_estimate,
)
from .finder import (
    CriticalKind,
    CriticalPoint,
    DegenerateHessianError,
    SearchConfig,
    default_grid_step,
    find_critical_points,
)
from .kacrice import (
    ConditionalGaussian,
    DegeneracyError,
    condition_on_zero_gradients,
    correlation_length,
    expansion_moment_mc,
    gradient_pair_density,
    gradient_pair_density_asymptotic,
    one_point_intensity_mc,
    second_factorial_by_quadrature,
    small_ball_probability_mc,
    two_point_correlation,
)
from .models import (
    BargmannFock,
    CovarianceModel,
    Interpolation,
    MomentDivergenceError,
    PowerLawTruncated,
    RandomWave,
    ShiftedRandomWave,
    SigmaDerivatives,
    derivative_covariance,
    is_shifted_random_wave,
    model_from_config,
    model_to_config,
    sigma_derivatives,
    spectral_moment,
)
from .sampling import (
    FieldRealization,
    empirical_derivative_variances,
    eval_gradient,
    eval_hessian,
    eval_many,
    sample_field,
    seeded_rng,
)
from .theory import (
    MIN_REPULSION_FACTOR,
    TheoryReport,
    grw_minimality_gap,
    k2_limit,
    lambda_c,
    repulsion_factor,
    scaling_order,
    second_factorial_asymptotic,
    theory_report,
)

__version__ = "0.1.0"

__all__ = [
    "BargmannFock",
    "ConditionalGaussian",
    "CovarianceModel",
    "CriticalKind",
    "CriticalPoint",
    "DegeneracyError",
    "DegenerateHessianError",
    "FieldRealization",
    "Interpolation",
    "MIN_REPULSION_FACTOR",
    "MomentDivergenceError",
    "MomentEstimate",
    "PowerLawTruncated",
    "RandomWave",
    "ScalingFit",
    "SearchConfig",
    "ShiftedRandomWave",
    "SigmaDerivatives",
    "TheoryReport",
    "condition_on_zero_gradients",
    "correlation_length",
    "default_grid_step",
    "default_window",
    "derivative_covariance",
    "empirical_derivative_variances",
    "estimate_intensity",
    "estimate_intensity_by_kind",
    "estimate_second_factorial",
    "eval_gradient",
    "eval_hessian",
    "eval_many",
    "expansion_moment_mc",
    "find_critical_points",
    "fit_scaling",
    "gradient_pair_density",
    "gradient_pair_density_asymptotic",
    "grw_minimality_gap",
    "is_shifted_random_wave",
    "k2_limit",
    "lambda_c",
    "model_from_config",
    "model_to_config",
    "one_point_intensity_mc",
    "poisson_control_ratio",
    "repulsion_factor",
    "repulsion_ratio_estimate",
    "sample_field",
    "scaling_order",
    "second_factorial_asymptotic",
    "second_factorial_by_quadrature",
    "seeded_rng",
    "sigma_derivatives",
    "small_ball_probability_mc",
    "spectral_moment",
    "theory_report",
    "two_point_correlation",
    "__version__",
]
