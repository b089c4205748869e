"""Synthesis of fractional Brownian paths and anisotropic 2-d fields,
discrete Radon projections, and directional regularity estimation from
generalized quadratic variations, with the asymptotic constants of the
estimator and a Monte Carlo evaluation harness."""

from .errors import (
    AllMomentsVanish,
    AnisofieldError,
    EmbeddingNotPSD,
    EqualDilations,
    GridTooCoarse,
    NegativeVariance,
    OrderTooLow,
    OrderZero,
    PathTooShort,
    QuadratureFailure,
    TailNotConverged,
    TooManyFailures,
    WindowOutOfSupport,
    ZeroFrequency,
    ZeroVariation,
)
from .filters import (
    DiscreteFilter,
    apply_filter,
    binomial_filter,
    cross_transfer,
    dilate,
    infer_order,
    parse_filter,
    taylor_constant,
    transfer_sq,
)
from .spectral import (
    AnisotropicIndex,
    SpectralModel,
    Window1DMinus,
    density,
    parse_index,
    parse_window,
    radon_density,
)
from .synthesis import (
    GridField2D,
    SampledPath,
    afb_sra,
    afb_sra_direct,
    derived_stream,
    fbm_path,
    fgn_autocovariance,
    fgn_exact,
    field_to_csv,
    read_field,
    read_path_csv,
    write_field,
    write_path_csv,
)
from .projection import (
    DIRECTIONS,
    ProjectionResult,
    project_axis,
    project_window,
    projection_to_csv,
)
from .estimator import (
    EstimateResult,
    PairEstimate,
    VariationSpec,
    estimate_H,
    estimate_direction,
    estimate_pair,
    quad_variation,
)
from .theory import (
    AsymptoticConstants,
    C_const,
    E_const,
    Gamma_fourier,
    asymptotic_constants,
    expected_variation_asymptotics,
    gamma_const,
    variation_ratio_limit,
)
from .harness import (
    EvalReport,
    EvalRow1D,
    EvalRow2D,
    ExperimentConfig,
    emit_table,
    load_config,
    run_eval_1d,
    run_eval_2d,
)

__version__ = "0.1.0"
