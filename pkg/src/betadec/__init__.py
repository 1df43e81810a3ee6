"""Beta-ensemble decimation identities: densities, samplers, closed-form
constants, deterministic quadrature oracles, and statistical verification."""

from .decimate import OrderedConfig, decimate, even, superimpose
from .density import (
    CircDAParams,
    CircularSpec,
    DAParams,
    EnsembleSpec,
    Weight,
    interlaces_circle,
    interlaces_line,
    log_density_ce,
    log_density_cda,
    log_density_da,
    log_density_me,
    log_density_superposition,
)
from .oracle import QuadSpec, eval_R, eval_S_circ, integrate_L, integrate_Q, theorem1_ratio
from .sampler import (
    ChainConfig,
    SampleBatch,
    TridiagMatrix,
    sample_ce,
    sample_da,
    sample_gaussian_tridiag,
    sample_me,
    tridiag_eigenvalues,
)
from .specfun import (
    AsymptoticQuery,
    MorrisArgs,
    SelbergArgs,
    asymptotic_coeffs,
    asymptotic_log_E,
    circ_norm_log,
    da_norm_log,
    i_r_closed,
    log_gamma,
    morris_log,
    selberg_log,
)
from .stats import (
    KSResult,
    ScalingMap,
    VerificationReport,
    gap_prob_closed_form,
    ks_two_sample,
    order_stat_pdf_estimate,
    scaling_map_apply,
    spacing_pdf_estimate,
    verify_composition,
    verify_decimation_relation,
    verify_gap_formula,
    verify_spacing_relation,
    verify_superposition,
)

__version__ = "0.1.0"
