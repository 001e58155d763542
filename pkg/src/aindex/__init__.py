"""Composite A-index, h-index, g-index and AsF for publication corpora."""

__version__ = "0.1.0"

from .analysis import GapReport, SweepSeries, compare, gap_report, renormalize_weights, sweep
from .ingestion import (
    AuthorProfile,
    Publication,
    build_profile,
    derive_inputs,
    normalize_author,
    parse_records,
    serialize_records,
)
from .metrics import (
    DEFAULT_WEIGHTS,
    IndexReport,
    InvalidInputsError,
    MetricInputs,
    WeightVector,
    a_index,
    asf,
    g_index,
    h_index,
    validate_inputs,
)
