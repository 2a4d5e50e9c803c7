"""Random-matrix, decorated-Airy and excursion representations of the KPZ
one-point distribution, with the numerics needed to cross-check them."""

from .airy import airy_ai, airy_ai_prime, airy_kernel, airy_kernel_diagonal, airy_pair
from .edge import (
    AiryPointSample,
    DecoratedSample,
    decorate,
    decorated_integral_exp,
    kpz_sample,
    kpz_value,
    sample_airy_edge,
    tail_truncation_bound,
)
from .excursion import (
    ExcursionPath,
    KernelEstimate,
    LocalTimeProfile,
    NoiseGrid,
    excursion_area,
    kernel_mean,
    kernel_rv_sample,
    local_time,
    sample_excursion,
    sample_noise,
)
from .fredholm import (
    QuadratureRule,
    first_moment_target,
    fredholm_det,
    gauss_legendre,
    laplace_rhs_beta1_mc,
    laplace_rhs_beta2,
    tracy_widom_f2,
    tracy_widom_f2_moments,
)
from .matrices import (
    ConvergenceError,
    DenseHermitian,
    FullSpectrum,
    SizeError,
    SpectralMeasureAtE1,
    TridiagonalSym,
    dense_functional_sample,
    edge_spectral_at_e1,
    full_eigen,
    householder_tridiagonalize,
    matrix_element_functional,
    moment_functional_11,
    sample_dumitriu_edelman,
    sample_goe_gue,
    sample_wigner_matched,
    spectral_at_e1,
    trace_functional,
    tridiagonal_functional_sample,
)
from .rand import SeedSpec, make_stream, replica_map
from .stats import ComparisonReport, EmpiricalSample, empirical_laplace, ks_two_sample, moment_check

__version__ = "0.1.0"
