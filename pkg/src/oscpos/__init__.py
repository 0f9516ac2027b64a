"""Certified numerical verification of positivity for oscillatory Gaussian kernels.

Layers, bottom up: ``precision_numerics`` (ball values, special-function
leaves, quadrature, certified determinants, seeded randomness),
``fp_kernel`` (the radial kernel family by two independent routes plus its
Fourier side), ``positivity_lab`` (grid and Wronskian determinant
criteria), ``biorthogonal`` (moment matrices and biorthogonal systems),
``multivariate`` (Monte Carlo and sphere-reduced oscillatory integrals),
``cli_reports`` (reproducible command-line reports).
"""

from .precision_numerics import (
    DetResult,
    NonConvergence,
    PoleError,
    PrecisionValue,
    QuadratureResult,
    SignCertificate,
    bessel_j,
    certified_det,
    fourier_line,
    integrate_semiaxis,
    ln_gamma,
    precision_cap,
    recip_gamma,
    seeded_rng,
    set_precision_cap,
)
from .fp_kernel import (
    FpParams,
    FpSeriesTerm,
    fp_asymptotic,
    fp_quadrature,
    fp_series,
    fp_u_derivatives,
    gp_eval,
    hp_partial,
    series_term,
)
from .positivity_lab import (
    GridSpec,
    HermitianViolation,
    InsufficientDerivatives,
    PositivityVerdict,
    bochner_pd_check,
    cauchy_binet_check,
    hankel_scan,
    tp_grid_det,
    wronskian_delta,
)
from .biorthogonal import (
    BiorthogonalSystem,
    DegenerateFiltration,
    FullGramReport,
    MomentMatrix,
    biorthogonalize,
    full_gram,
    leading_minors,
    moment_entry,
    moment_matrix,
    normalize_coupling,
    twisted_det,
)
from .multivariate import (
    Density,
    HomogeneousPoly,
    IntegralEstimate,
    ScalingReport,
    SweepConfig,
    evidence_sweep,
    i_direct_mc,
    i_separable,
    i_sphere_reduced,
    scaling_check,
)

__version__ = "0.1.0"
