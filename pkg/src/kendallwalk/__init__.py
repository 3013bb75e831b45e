"""Kendall generalized convolution, the Williamson transform and the Kendall random walk."""

from .measures import (
    QuadratureError,
    RngStream,
    StepDistribution,
    SymmetricPareto,
    SymmetricTwoPoint,
    SymmetricUniform,
    TabulatedSymmetric,
    TwoPointParetoMixture,
)
from .williamson import JumpError, TransformFn, forward, g_of, inverse, psi, transform_of
from .kendall import (
    ConvolutionPowerLaw,
    PointConvolutionLaw,
    convolve_point,
    example_cdf,
    kernel_cdf_h,
    power_cdf,
    stable_limit_cdf,
    transition_cdf,
)
from .walk import WalkBatch, WalkConfig, first_passage, simulate_batch, step_kernel, step_recursion
from .excursions import (
    ExcursionLaw,
    GeometricKendall,
    geometric_kendall_transform,
    overshoot_alpha_moment,
    overshoot_cdf,
    phi_n,
    tau_pgf,
    wiener_hopf_H,
)

__version__ = "0.1.0"
