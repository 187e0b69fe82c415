"""Exact criteria and numerical certificates for membership in the Wiener algebra A(R^d)."""

from .bernstein import DyadicReport, ScaleRange, bernstein_sum_1d, bernstein_sum_nd, tail_verdict
from .criteria import CriterionVerdict, RuleInputs, Status, overall_status, run_all
from .exponents import INF, Exponent, ExponentAssignment
from .field import SampledField, difference_pieces, evaluate, grid_derivative, lp_norm, sample
from .fourier import ATrend, a_norm_trend, truncated_fourier_l1
from .gallery import GalleryFunction, ModelParams, classify_m, construct_counterexample_params
from .hardy import HardyReport, empirical_constant, hardy_check, lemma_star_check, steklov_average

__version__ = "0.1.0"
