"""Core computations for domain robustness metrics."""

from robustness_metrics.core.analysis import (
    average_predictor_correlations,
    build_challenge_curve,
    challenge_curve,
    characterize,
    pool_shifts,
    predictor_correlations,
    scenario_test,
)
from robustness_metrics.core.corpus_loader import load_corpora, load_stopwords
from robustness_metrics.core.divergence import divergence_matrix, js_divergence, pair_distributions
from robustness_metrics.core.errors import (
    ConfigFileError,
    DataError,
    RobustnessError,
    TheoremAssertionError,
)
from robustness_metrics.core.metrics import (
    build_matrix,
    classify_ordering,
    classify_scenario,
    compute_shifts,
    shift_metrics,
    task_summary,
)
from robustness_metrics.core.report_exporter import ReportExporter, emit_report, load_report
from robustness_metrics.core.results_parser import ResultsParser, parse_results
from robustness_metrics.core.simulation import simulate
from robustness_metrics.core.theorem import (
    check_equivalence,
    check_hypotheses,
    check_joint,
    compute_moments,
    exact_moments,
    sweep,
    verify_identities,
)

__all__ = [
    "ConfigFileError",
    "DataError",
    "ReportExporter",
    "ResultsParser",
    "RobustnessError",
    "TheoremAssertionError",
    "average_predictor_correlations",
    "build_challenge_curve",
    "build_matrix",
    "challenge_curve",
    "characterize",
    "check_equivalence",
    "check_hypotheses",
    "check_joint",
    "classify_ordering",
    "classify_scenario",
    "compute_moments",
    "compute_shifts",
    "divergence_matrix",
    "emit_report",
    "exact_moments",
    "js_divergence",
    "load_corpora",
    "load_report",
    "load_stopwords",
    "pair_distributions",
    "parse_results",
    "pool_shifts",
    "predictor_correlations",
    "scenario_test",
    "shift_metrics",
    "simulate",
    "sweep",
    "task_summary",
    "verify_identities",
]
