"""Pydantic models for statistical characterization of domain shifts."""

from __future__ import annotations

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from robustness_metrics.models.performance import Ordering, Scenario


class RankingKey(str, Enum):
    """Key used to rank shifts from hardest to easiest."""

    BY_SD = "sd"
    BY_TD = "td"
    BY_IDD = "idd"


class PoolingKey(str, Enum):
    """How shifts are grouped before characterization.

    Keys:
        MODEL: One group per (task, model)
        TASK: One group per task, all models pooled
        GROUP: One group per (task, model group), e.g. fine-tuned vs few-shot
        POOLED: A single group over everything
    """

    MODEL = "model"
    TASK = "task"
    GROUP = "group"
    POOLED = "pooled"


class ChiSquareResult(BaseModel):
    """Outcome of a chi-square goodness-of-fit test.

    Attributes:
        statistic: Pearson chi-square statistic
        df: Degrees of freedom (categories - 1)
        p_value: Upper tail probability of the statistic
        alpha: Family-wise significance level
        alpha_adjusted: Bonferroni-adjusted level
        reject: Whether p_value < alpha_adjusted
    """

    statistic: float = Field(ge=0.0)
    df: int = Field(ge=1)
    p_value: float = Field(ge=0.0, le=1.0)
    alpha: float = Field(gt=0.0, lt=1.0)
    alpha_adjusted: float = Field(gt=0.0, lt=1.0)
    reject: bool

    model_config = ConfigDict(frozen=True)


class CharacterizationRow(BaseModel):
    """Characterization statistics of one group of shifts.

    Correlation and R^2 fields are None when undefined on the group (a constant
    series); the reason is recorded in ``diagnostics``.

    Attributes:
        task: Task label ("*" when pooled across tasks)
        model_group: Model, model group or "*" depending on pooling
        n_shifts: Number of shifts in the group
        mean_sd: Mean SD
        mean_td: Mean TD
        var_sd: Sample variance of SD
        var_td: Sample variance of TD
        std_sd: Sample standard deviation of SD
        std_td: Sample standard deviation of TD
        worst_sd: Maximum SD
        worst_td: Maximum TD
        corr_st_ss_pearson: Pearson correlation of ST and SS
        corr_st_tt_pearson: Pearson correlation of ST and TT
        corr_st_ss_spearman: Spearman correlation of ST and SS
        corr_st_tt_spearman: Spearman correlation of ST and TT
        r2_idd_sd: R^2 of SD regressed on IDD
        r2_idd_td: R^2 of TD regressed on IDD
        mad_st_ss: Mean |ST - SS| (= mean |SD|)
        mad_st_td: Mean |ST - TT| (= mean |TD|)
        positive_sd_share: Share of shifts with positive SD
        positive_td_share: Share of shifts with positive TD
        variance_gap_sign: Sign of var_sd - var_td
        mad_gap_sign: Sign of mad_st_ss - mad_st_td
        gap_signs_agree: Whether the two signs agree
        diagnostics: Notes on absent fields
    """

    task: str
    model_group: str
    n_shifts: int = Field(ge=1)
    mean_sd: float
    mean_td: float
    var_sd: float
    var_td: float
    std_sd: float
    std_td: float
    worst_sd: float
    worst_td: float
    corr_st_ss_pearson: Optional[float] = None  # noqa: UP045
    corr_st_tt_pearson: Optional[float] = None  # noqa: UP045
    corr_st_ss_spearman: Optional[float] = None  # noqa: UP045
    corr_st_tt_spearman: Optional[float] = None  # noqa: UP045
    r2_idd_sd: Optional[float] = None  # noqa: UP045
    r2_idd_td: Optional[float] = None  # noqa: UP045
    mad_st_ss: float = Field(ge=0.0)
    mad_st_td: float = Field(ge=0.0)
    positive_sd_share: float = Field(ge=0.0, le=1.0)
    positive_td_share: float = Field(ge=0.0, le=1.0)
    variance_gap_sign: int = Field(ge=-1, le=1)
    mad_gap_sign: int = Field(ge=-1, le=1)
    gap_signs_agree: bool
    diagnostics: list[str] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)


class ScenarioTestReport(BaseModel):
    """Ordering counts, uniformity test and scenario proportions of a group.

    Attributes:
        task: Task label
        model_group: Group label
        ordering_counts: Count per strict ordering
        excluded_degenerate: Shifts with tied (SS, TT, ST)
        chi: Six-category uniform chi-square test
        grouped_chi: Optional four-scenario test with expected (2, 2, 1, 1)/6
        scenario_proportions: Share of each non-Boundary scenario
        boundary_count: Shifts labelled Boundary
    """

    task: str
    model_group: str
    ordering_counts: dict[Ordering, int]
    excluded_degenerate: int = Field(ge=0)
    chi: ChiSquareResult
    grouped_chi: Optional[ChiSquareResult] = None  # noqa: UP045
    scenario_proportions: dict[Scenario, float]
    boundary_count: int = Field(ge=0)

    model_config = ConfigDict(frozen=True)


class ChallengeCurvePoint(BaseModel):
    """Average drops over the k hardest shifts.

    Attributes:
        k: Number of hardest shifts included
        avg_sd_over_top_k: Mean SD over those shifts
        avg_td_over_top_k: Mean TD over those shifts
        ranking_key: Key the shifts were ranked by
    """

    k: int = Field(ge=1)
    avg_sd_over_top_k: float
    avg_td_over_top_k: float
    ranking_key: RankingKey

    model_config = ConfigDict(frozen=True)


class ChallengeCurve(BaseModel):
    """Challenge curve of one group of shifts."""

    task: str
    model_group: str
    ranking_key: RankingKey
    points: list[ChallengeCurvePoint]

    model_config = ConfigDict(frozen=True)


class PredictorCorrelations(BaseModel):
    """Spearman correlations of drop predictors with the drops.

    Attributes:
        task: Task label
        model_group: Model or group label
        n_shifts: Number of shifts correlated
        js_sd: Spearman(JS divergence, SD)
        js_td: Spearman(JS divergence, TD)
        idd_sd: Spearman(IDD, SD)
        idd_td: Spearman(IDD, TD)
        diagnostics: Notes on absent coefficients
    """

    task: str
    model_group: str
    n_shifts: int = Field(ge=0)
    js_sd: Optional[float] = None  # noqa: UP045
    js_td: Optional[float] = None  # noqa: UP045
    idd_sd: Optional[float] = None  # noqa: UP045
    idd_td: Optional[float] = None  # noqa: UP045
    diagnostics: list[str] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)
