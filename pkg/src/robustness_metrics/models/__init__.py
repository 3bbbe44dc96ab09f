"""Data models for domain robustness analysis."""

from robustness_metrics.models.analysis import (
    ChallengeCurve,
    ChallengeCurvePoint,
    CharacterizationRow,
    ChiSquareResult,
    PoolingKey,
    PredictorCorrelations,
    RankingKey,
    ScenarioTestReport,
)
from robustness_metrics.models.divergence import (
    Corpus,
    DivergenceFailure,
    DivergenceMatrix,
    DivergenceResult,
    TokenDistribution,
)
from robustness_metrics.models.performance import (
    DropKind,
    Ordering,
    PerformanceMatrix,
    RunRecord,
    Scenario,
    ShiftMetrics,
    SkippedShift,
    TaskSummary,
)
from robustness_metrics.models.report import Diagnostics, Report
from robustness_metrics.models.theorem import (
    DiscreteJoint,
    DomainSpace,
    EquivalenceReport,
    HypothesisReport,
    IdentityCheck,
    IdentityReport,
    JointAtom,
    MomentSet,
    PairMode,
    SimulationResult,
    TheoremCheck,
    TheoremSweepReport,
    TraceSummary,
)

__all__ = [
    "ChallengeCurve",
    "ChallengeCurvePoint",
    "CharacterizationRow",
    "ChiSquareResult",
    "Corpus",
    "Diagnostics",
    "DiscreteJoint",
    "DivergenceFailure",
    "DivergenceMatrix",
    "DivergenceResult",
    "DomainSpace",
    "DropKind",
    "EquivalenceReport",
    "HypothesisReport",
    "IdentityCheck",
    "IdentityReport",
    "JointAtom",
    "MomentSet",
    "Ordering",
    "PairMode",
    "PerformanceMatrix",
    "PoolingKey",
    "PredictorCorrelations",
    "RankingKey",
    "Report",
    "RunRecord",
    "Scenario",
    "ScenarioTestReport",
    "ShiftMetrics",
    "SimulationResult",
    "SkippedShift",
    "TaskSummary",
    "TheoremCheck",
    "TheoremSweepReport",
    "TokenDistribution",
    "TraceSummary",
]
