"""Numerical toolkit for subtraction and backward-shift operator norms on the disc."""

from .bounds import (
    BoundCertificate,
    OptimizedBound,
    bergman_transfer_check,
    interpolation_bound,
    optimize_a1,
    optimize_h1_bshift,
    optimize_h1_szop,
    sharp_szr_constant,
    thm1_measure_lower_bound,
    thm2_f0_upper_bound,
    verify_a1_witness,
    verify_h1_bshift_witness,
    verify_h1_szop_witness,
)
from .circlefn import (
    BoundarySet,
    CircleFn,
    convolve,
    decreasing_rearrangement,
    integrate_over,
    lp_norm,
    mean,
    step_function,
)
from .operators import ExtremalFamily, MobiusFn, SearchReport, Space, ratio, search_lower_bound
from .spaces import (
    HarmonicFn,
    RadialWeight,
    TaylorFn,
    bergman_norm,
    h1_norm,
    harmonic_measure_arc,
    hardy_norm,
    integral_mean,
    outer_function,
    poisson_extend,
    poisson_kernel,
)

__version__ = "0.1.0"
