"""Carouseling analysis of MEMS angular-rate sensor error processes."""

__version__ = "0.1.0"

from .allan import (
    AllanCurve,
    GyroErrorParams,
    allan_statistic,
    allan_variance,
    estimate_params,
    integrate_angle,
    predict_interval,
)
from .carousel import (
    CarouselConfig,
    CarouselSignal,
    VariancePrediction,
    carousel_average,
    coefficient_vectors,
    direct_average,
    exact_linear_variance,
    flicker_gain_vectors,
    predict_avg_rrw,
    predict_carousel_rrw,
    predict_flicker,
    reduction_factor_rrw,
    synthesize_pair,
)
from .constant_avar import build_K, gen_R, gen_S, gray_code_matrix, mvue_c2, pinv_apply, pinv_K
from .logs import GyroLog, LogFormatError, ingest, write_log
from .noise import (
    FractionalMatrix,
    compose_error,
    flicker_coefficients,
    fractional_integrate,
    gen_bias,
    gen_flicker,
    gen_rrw,
    gen_white,
)
from .series import InvalidParameterError, ProcessSpec, SampleSeries, Seed

__all__ = [
    "AllanCurve",
    "CarouselConfig",
    "CarouselSignal",
    "FractionalMatrix",
    "GyroErrorParams",
    "GyroLog",
    "InvalidParameterError",
    "LogFormatError",
    "ProcessSpec",
    "SampleSeries",
    "Seed",
    "VariancePrediction",
    ".allan",
    ".noise",
    "allan_statistic",
    "allan_variance",
    "build_K",
    "carousel_average",
    "coefficient_vectors",
    "compose_error",
    "direct_average",
    "estimate_params",
    "exact_linear_variance",
    "flicker_coefficients",
    "flicker_gain_vectors",
    "fractional_integrate",
    "from",
    "gen_R",
    "gen_S",
    "gen_bias",
    "gen_flicker",
    "gen_rrw",
    "gen_white",
    "gray_code_matrix",
    "import",
    "ingest",
    "integrate_angle",
    "mvue_c2",
    "pinv_K",
    "pinv_apply",
    "predict_avg_rrw",
    "predict_carousel_rrw",
    "predict_flicker",
    "predict_interval",
    "reduction_factor_rrw",
    "synthesize_pair",
    "write_log",
]
