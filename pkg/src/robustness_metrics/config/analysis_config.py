"""Configuration for matrix building and shift characterization.

Example:
    # Use defaults
    config = AnalysisConfig()

    # Pool per model and rank challenge curves by TD
    config = AnalysisConfig(pooling="model", ranking="td")

    # Via environment variables
    # export ROBUSTNESS_EPSILON=1e-6
    config = AnalysisConfig()
"""

from __future__ import annotations

from enum import Enum
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from robustness_metrics.models.analysis import PoolingKey, RankingKey


class ScoreScale(str, Enum):
    """Scale of scores in the results file."""

    PERCENT = "percent"
    UNIT = "unit"


class AnalysisConfig(BaseSettings):
    """Configuration for the analysis pipeline.

    Settings can be configured via environment variables with ROBUSTNESS_ prefix,
    or by passing values directly.

    Environment Variables:
        ROBUSTNESS_EPSILON: Tie tolerance for scenario/ordering labels (default: 1e-9)
        ROBUSTNESS_SCORE_SCALE: "percent" (0-100) or "unit" (0-1, rescaled) (default: percent)
        ROBUSTNESS_ALLOW_OUT_OF_RANGE: Accept scores outside 0-100 (default: False)
        ROBUSTNESS_POOLING: model, task, group or pooled (default: task)
        ROBUSTNESS_RANKING: sd, td or idd (default: sd)
        ROBUSTNESS_ALPHA: Family-wise significance level (default: 0.05)
        ROBUSTNESS_COMPARISONS: Bonferroni comparison count (default: 1)
    """

    model_config = SettingsConfigDict(
        env_prefix="ROBUSTNESS_",
        case_sensitive=False,
        frozen=False,
    )

    epsilon: float = Field(
        default=1e-9,
        ge=0.0,
        description="Tie tolerance for scenario and ordering labels",
    )

    score_scale: ScoreScale = Field(
        default=ScoreScale.PERCENT,
        description="Scale of input scores; unit scores are multiplied by 100",
    )

    allow_out_of_range: bool = Field(
        default=False,
        description="Accept scores outside [0, 100]",
    )

    pooling: PoolingKey = Field(
        default=PoolingKey.TASK,
        description="How shifts are grouped for characterization",
    )

    ranking: RankingKey = Field(
        default=RankingKey.BY_SD,
        description="Key the challenge curve ranks shifts by",
    )

    ks: Optional[list[int]] = Field(  # noqa: UP045
        default=None,
        description="Challenge curve subset sizes (default 1..n)",
    )

    alpha: float = Field(
        default=0.05,
        gt=0.0,
        lt=1.0,
        description="Family-wise significance level",
    )

    comparisons: int = Field(
        default=1,
        ge=1,
        description="Number of comparisons for the Bonferroni correction",
    )

    grouped_scenario_test: bool = Field(
        default=False,
        description="Also run the four-scenario grouped chi-square test",
    )

    model_groups: dict[str, str] = Field(
        default_factory=dict,
        description="Model -> group label, used with pooling=group",
    )

    @field_validator("ks")
    @classmethod
    def _positive_ks(cls, value: Optional[list[int]]) -> Optional[list[int]]:  # noqa: UP045
        if value is not None and any(k < 1 for k in value):
            raise ValueError("challenge curve sizes must be positive")
        return value
