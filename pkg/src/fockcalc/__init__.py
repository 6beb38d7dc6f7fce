"""Numerical operator calculus on the complex side of the Gaussian picture.

Truncated coefficient representations of analytic kernels, Wick and
anti-Wick symbols, the binomial transition operators connecting them,
composition products, weighted-norm diagnostics for the coefficient-space
hierarchy, and an independent Gauss-Hermite quadrature oracle validating
every integral formula.
"""

from .binomial import l2_r_norm, s0, s0_inv, t0, t0_star
from .errors import DimensionMismatch, DomainError, PreconditionError, SchemaError
from .multiindex import enumerate_degree, multi_binomial, multi_factorial, total_degree
from .quadrature import (
    QuadratureGrid,
    antiwick_apply_quad,
    bargmann_quad,
    berezin_transform_quad,
    complex_grid,
    default_nodes,
    gauss_hermite_grid,
    gaussian_window,
    integrate_gaussian_c,
    rank_one_check,
    stft_gaussian_quad,
    toeplitz_matrix_quad,
    twisted_product_quad,
    uv_inv,
    uv_map,
    wick_apply_quad,
)
from .serialize import load_coeffs, save_coeffs
from .series import (
    KernelCoeffs,
    SeriesCoeffs,
    a2_bilinear,
    a2_inner,
    diamond,
    eval_basis,
    eval_kernel,
    eval_series,
    hermite_eval,
    kernel_delta,
    ladder,
    multiply,
    series_delta,
)
from .spaces import (
    DiagnosticReport,
    GrowthOrder,
    SpaceSpec,
    WeightSpec,
    classify,
    kappa_weight,
    omega_weight,
    theta_weight,
    verify_pointwise_bound,
    weighted_norm,
)
from .symbolcalc import (
    OperatorMatrix,
    a2_r_norm,
    antiwick_to_wick,
    apply_operator,
    compose_kernels,
    identity_kernel,
    kernel_to_wick,
    operator_matrix,
    psd_check,
    t0_bound_constant,
    twisted_product,
    wick_to_antiwick,
    wick_to_kernel,
)

__version__ = "0.1.0"
