"""Simulation and verification toolkit for extremal statistics of random polygons.

Computes extremal perimeters and areas of inscribed and circumscribed
m-gons over random points on the unit circle, and statistically verifies
their Weibull limit laws, tail-probability asymptotics, and
Poisson-approximation error bounds.
"""

from .kernels import (
    GapVector,
    KernelKind,
    Orientation,
    canonicalize,
    deficit,
    extremal_value,
    kernel_eval,
)
from .constants import (
    LimitLaw,
    asymptotic_constant,
    ball_volume,
    form_eigenvalues,
    inverse_transform,
    limit_cdf,
    limit_constant,
    limit_law,
    limit_quantile,
    normalize_stat,
    quadratic_form_matrix,
    sine_product,
)
from .search import (
    BRUTE_FORCE_CAP,
    SearchMethod,
    SearchResult,
    umax_bruteforce,
    umax_cyclic_dp,
)
from .engine import (
    DEFAULT_BUDGET,
    BoundReport,
    BudgetExceededError,
    ExperimentConfig,
    OverlapEstimate,
    TailEstimate,
    estimate_overlap,
    estimate_tail,
    lao_mayer_bound,
    run_experiment,
)
from .analysis import (
    EmpiricalDistribution,
    RateFit,
    ks_statistic,
    rate_fit,
    wilson_ci,
)

__version__ = "0.1.0"

__all__ = [
    "GapVector",
    "KernelKind",
    "Orientation",
    "canonicalize",
    "deficit",
    "extremal_value",
    "kernel_eval",
    "LimitLaw",
    "asymptotic_constant",
    "ball_volume",
    "form_eigenvalues",
    "inverse_transform",
    "limit_cdf",
    "limit_constant",
    "limit_law",
    "limit_quantile",
    "normalize_stat",
    "quadratic_form_matrix",
    "sine_product",
    "BRUTE_FORCE_CAP",
    "SearchMethod",
    "SearchResult",
    "umax_bruteforce",
    "umax_cyclic_dp",
    "DEFAULT_BUDGET",
    "BoundReport",
    "BudgetExceededError",
    "ExperimentConfig",
    "OverlapEstimate",
    "TailEstimate",
    "estimate_overlap",
    "estimate_tail",
    "lao_mayer_bound",
    "run_experiment",
    "EmpiricalDistribution",
    "RateFit",
    "ks_statistic",
    "rate_fit",
    "wilson_ci",
    "__version__",
]
