"""Pydantic model of an emitted analysis report."""

from __future__ import annotations

from datetime import datetime
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

from robustness_metrics.models.analysis import (
    ChallengeCurve,
    CharacterizationRow,
    PredictorCorrelations,
    ScenarioTestReport,
)
from robustness_metrics.models.divergence import DivergenceMatrix
from robustness_metrics.models.performance import TaskSummary
from robustness_metrics.models.theorem import SimulationResult, TheoremCheck, TheoremSweepReport


class Diagnostics(BaseModel):
    """Data-quality notes collected while building a report.

    Attributes:
        skipped_shifts: Shifts left out because of missing cells
        boundary_count: Shifts with |SD| or |TD| within the tolerance
        degenerate_count: Shifts with tied (SS, TT, ST)
        partial_matrices: "task/model" labels of incomplete matrices
        messages: Free-form warnings
    """

    skipped_shifts: int = Field(default=0, ge=0)
    boundary_count: int = Field(default=0, ge=0)
    degenerate_count: int = Field(default=0, ge=0)
    partial_matrices: list[str] = Field(default_factory=list)
    messages: list[str] = Field(default_factory=list)


class Report(BaseModel):
    """Everything a CLI run computed, in canonical JSON-serializable form.

    Attributes:
        generated_at: Creation time (None in deterministic mode)
        tool_version: Package version
        command: Subcommand that produced the report
        config: Effective configuration of the run
        summaries: One TaskSummary per (task, model)
        characterization: Characterization rows per pooling group
        scenario_tests: Ordering tests per pooling group
        challenge_curves: Challenge curves per pooling group
        divergence: Divergence matrix between domain corpora
        predictor_correlations: Drop-predictor correlations per (task, model)
        theorem_check: Exact checks of a user-supplied joint
        theorem_sweep: Randomized theorem suite summary
        simulation: Seeded simulation result
        diagnostics: Data-quality notes
    """

    generated_at: Optional[datetime] = None  # noqa: UP045
    tool_version: str
    command: str
    config: dict[str, Any] = Field(default_factory=dict)
    summaries: list[TaskSummary] = Field(default_factory=list)
    characterization: Optional[list[CharacterizationRow]] = None  # noqa: UP045
    scenario_tests: Optional[list[ScenarioTestReport]] = None  # noqa: UP045
    challenge_curves: Optional[list[ChallengeCurve]] = None  # noqa: UP045
    divergence: Optional[DivergenceMatrix] = None  # noqa: UP045
    predictor_correlations: Optional[list[PredictorCorrelations]] = None  # noqa: UP045
    theorem_check: Optional[TheoremCheck] = None  # noqa: UP045
    theorem_sweep: Optional[TheoremSweepReport] = None  # noqa: UP045
    simulation: Optional[SimulationResult] = None  # noqa: UP045
    diagnostics: Diagnostics = Field(default_factory=Diagnostics)

    model_config = ConfigDict(frozen=True)
