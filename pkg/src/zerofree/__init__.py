"""Unimodular zerofree integer matrices, classified up to the double
signed-permutation action: canonical forms, exhaustive class enumeration,
count sequences, and extremal inverse-entry searches."""

from .canonical import (
    CanonicalClass,
    GroupElement,
    ZeroEntryError,
    apply,
    canonical_form,
    canonical_form_oracle,
    flatten_key,
    inverse_class,
    orbit_equivalent,
    random_zerofree_matrix,
    structural_cmp,
    structural_key,
)
from .closedform import Prop5Label, prop5_count, prop5_enumerate, totient
from .engine import (
    CheckpointError,
    ClassQuery,
    ConjectureReport,
    EnumerationResult,
    IncompleteSearchError,
    MaxBetaResult,
    SearchCheckpoint,
    TierGateError,
    default_thread_budget,
    enumerate_classes,
    load_checkpoint,
    max_beta_search,
    save_checkpoint,
    sequence_scan,
    theoretical_beta_bound,
    verify_conjecture,
)
from .matrix import (
    ClassStats,
    IntMatrix,
    NotUnimodularError,
    Prop0Report,
    RegimeError,
    adjugate_inverse,
    classify,
    det,
    det_bareiss,
    det_cofactor,
    verify_prop0,
)
from .textio import MatrixParseError, MatrixRecord, format_matrix_line, parse_matrix_line

__version__ = "0.1.0"

__all__ = [
    "CanonicalClass",
    "CheckpointError",
    "ClassQuery",
    "ClassStats",
    "ConjectureReport",
    "EnumerationResult",
    "GroupElement",
    "IncompleteSearchError",
    "IntMatrix",
    "MatrixParseError",
    "MatrixRecord",
    "MaxBetaResult",
    "NotUnimodularError",
    "Prop0Report",
    "Prop5Label",
    "RegimeError",
    "SearchCheckpoint",
    "TierGateError",
    "ZeroEntryError",
    "adjugate_inverse",
    "apply",
    "canonical_form",
    "canonical_form_oracle",
    "classify",
    "default_thread_budget",
    "det",
    "det_bareiss",
    "det_cofactor",
    "enumerate_classes",
    "flatten_key",
    "format_matrix_line",
    "inverse_class",
    "load_checkpoint",
    "max_beta_search",
    "orbit_equivalent",
    "parse_matrix_line",
    "prop5_count",
    "prop5_enumerate",
    "random_zerofree_matrix",
    "save_checkpoint",
    "sequence_scan",
    "structural_cmp",
    "structural_key",
    "theoretical_beta_bound",
    "totient",
    "verify_conjecture",
    "verify_prop0",
]
