"""Locality metrics for memory-access traces.

The package measures and interconverts the standard locality metrics of a
trace: reuse time and reuse distance sequences, per-datum profiles,
histograms, footprint curves, steady-state working sets, miss-ratio curves,
and cache timing quantities. Reconstruction routines rebuild traces from
reuse metrics, and every derived quantity has a brute-force counterpart so
conversions can be cross-checked.

Hot kernels run in a compiled extension when available; set LOCMETRICS_PURE=1
before import to force the pure Python fallback. The active choice is
reported by ``locmetrics.BACKEND``.
"""

from __future__ import annotations

from ._dispatch import BACKEND
from .cache import (
    PROVENANCE_FP_DIFF,
    PROVENANCE_RT_CONVERSION,
    PROVENANCE_SIMULATOR,
    LruSimulation,
    MissRatioCurve,
    expected_distance_estimate,
    fill_time,
    fill_time_from_inter_miss,
    inter_miss,
    lru_simulate,
    lru_simulate_detail,
    mrc_fp_diff,
    mrc_reuse_time_conversion,
    presence_probability,
    residence_time,
    steady_state_mrc,
    time_window_miss_ratio,
)
from .errors import OracleMismatchError, ParseError, ValidationError
from .footprint import (
    FOOTPRINT_METHODS,
    FootprintCurve,
    SteadyStateCurve,
    compute_footprint,
    fp_absence_counting,
    fp_additive,
    fp_bruteforce,
    fp_incremental,
    head_tail_adjust,
    recover_rt_from_fp,
    ss_fp_limit,
    ss_fp_recurrence,
    ss_fp_subtractive,
    wss,
)
from .histogram import (
    COLD_EXCLUDE,
    COLD_INCLUDE,
    BinnedHistogram,
    ReuseHistogram,
    RtInvariantReport,
    bin_log_linear,
    build_histogram,
    check_rt_invariants,
    format_histogram,
    is_sealed,
    parse_histogram,
    probability,
    sum_histograms,
    tail_probability,
)
from .reconstruct import (
    ai_from_pd_rd,
    ai_from_pd_rt,
    ai_from_rd,
    ai_from_rt,
    format_profiles,
    format_reuse_sequence,
    parse_profiles,
    parse_reuse_sequence,
)
from .trace import (
    GENERATOR_KINDS,
    INFINITE,
    REUSE_DISTANCE,
    REUSE_TIME,
    PerDatumProfile,
    ReuseSequence,
    Trace,
    format_trace,
    generate,
    interleave,
    parse_trace,
    per_datum,
    reuse_distance_sequence,
    reuse_time_sequence,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "COLD_EXCLUDE",
    "COLD_INCLUDE",
    "FOOTPRINT_METHODS",
    "GENERATOR_KINDS",
    "INFINITE",
    "PROVENANCE_FP_DIFF",
    "PROVENANCE_RT_CONVERSION",
    "PROVENANCE_SIMULATOR",
    "REUSE_DISTANCE",
    "REUSE_TIME",
    "BinnedHistogram",
    "FootprintCurve",
    "LruSimulation",
    "MissRatioCurve",
    "OracleMismatchError",
    "ParseError",
    "PerDatumProfile",
    "ReuseHistogram",
    "ReuseSequence",
    "RtInvariantReport",
    "SteadyStateCurve",
    "Trace",
    "ValidationError",
    "ai_from_pd_rd",
    "ai_from_pd_rt",
    "ai_from_rd",
    "ai_from_rt",
    "bin_log_linear",
    "build_histogram",
    "check_rt_invariants",
    "compute_footprint",
    "expected_distance_estimate",
    "fill_time",
    "fill_time_from_inter_miss",
    "format_histogram",
    "format_profiles",
    "format_reuse_sequence",
    "format_trace",
    "fp_absence_counting",
    "fp_additive",
    "fp_bruteforce",
    "fp_incremental",
    "generate",
    "head_tail_adjust",
    "inter_miss",
    "interleave",
    "is_sealed",
    "lru_simulate",
    "lru_simulate_detail",
    "mrc_fp_diff",
    "mrc_reuse_time_conversion",
    "parse_histogram",
    "parse_profiles",
    "parse_reuse_sequence",
    "parse_trace",
    "per_datum",
    "presence_probability",
    "probability",
    "recover_rt_from_fp",
    "residence_time",
    "reuse_distance_sequence",
    "reuse_time_sequence",
    "ss_fp_limit",
    "ss_fp_recurrence",
    "ss_fp_subtractive",
    "steady_state_mrc",
    "sum_histograms",
    "tail_probability",
    "time_window_miss_ratio",
    "wss",
]
