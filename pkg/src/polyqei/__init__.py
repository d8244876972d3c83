"""Bounds on the minimal eigenvalue of clamped polyharmonic operators and the
quantum energy inequality bounds built from them."""

from .cylinder_model import CylinderResult, compare_to_qei, energy_density
from .errors import ConsistencyError, ConvergenceError, SingularSystemError
from .exact_bounds import (
    AlphaSolution,
    SpectralRadiusBounds,
    alpha_closed_form,
    alpha_via_linear_system,
    ratio_Rn_series,
    residual_check,
    spectral_bounds,
    stirling_asymptote,
)
from .lp_norms import LpNormBounds, ddfl_comparison, norm_inf, norm_p_bounds
from .qei_bounds import (
    QeiBound,
    asymptotic_bound,
    bound_at_n,
    c_dn,
    critical_n,
    k_d,
    k_d_prime,
    optimize_n,
)
from .rational_core import TPolynomial, ZPolynomial, differentiate, expand_z_to_t, solve_linear_exact
from .special_fn import bessel_k, digamma, ln_gamma, q_d, trigamma
from .spectral_numeric import (
    GreenKernel,
    SpectralEstimate,
    apply_T,
    build_green_kernel,
    empirical_H,
    nystrom_eigs,
    rank1_ratio,
)

__version__ = "0.1.0"
