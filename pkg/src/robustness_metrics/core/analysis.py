"""Task-level characterization of domain shifts.

Builds characterization rows, ordering/scenario tests, challenge curves and
drop-predictor correlations over lists of ShiftMetrics.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Callable, Iterable, Mapping, Sequence
from typing import Optional

import numpy as np

from robustness_metrics.core.errors import (
    AllDegenerateError,
    ConstantInputError,
    ConstantPredictorError,
    KTooLargeError,
    MissingDivergenceError,
    TooFewShiftsError,
)
from robustness_metrics.core.metrics import (
    DEFAULT_EPSILON,
    compute_shifts,
    scenario_for_ordering,
)
from robustness_metrics.core.statistics import (
    chi_square_gof,
    chi_square_uniform,
    mean_abs_deviation,
    pearson,
    r_squared,
    sample_var,
    spearman,
)
from robustness_metrics.models.analysis import (
    ChallengeCurve,
    ChallengeCurvePoint,
    CharacterizationRow,
    PoolingKey,
    PredictorCorrelations,
    RankingKey,
    ScenarioTestReport,
)
from robustness_metrics.models.performance import (
    Ordering,
    PerformanceMatrix,
    Scenario,
    ShiftMetrics,
)

logger = logging.getLogger(__name__)

MIN_SHIFTS = 3
POOLED_LABEL = "*"

# Expected share of each scenario when the six orderings are equally likely
GROUPED_SCENARIOS = (
    Scenario.CLASSIC,
    Scenario.NO_CHALLENGE,
    Scenario.OBSERVED,
    Scenario.UNOBSERVED,
)
GROUPED_PROBS = (2 / 6, 2 / 6, 1 / 6, 1 / 6)

_VALID_SCENARIOS = tuple(s for s in Scenario if s is not Scenario.BOUNDARY)


def _sign(value: float) -> int:
    return int(np.sign(value))


def _optional(
    compute: Callable[[], float], field: str, diagnostics: list[str]
) -> Optional[float]:  # noqa: UP045
    try:
        return compute()
    except (ConstantInputError, ConstantPredictorError) as e:
        diagnostics.append(f"{field}: {e}")
        return None


def pool_shifts(
    matrices: Iterable[PerformanceMatrix],
    pooling: PoolingKey = PoolingKey.TASK,
    model_groups: Optional[Mapping[str, str]] = None,  # noqa: UP045
    epsilon: float = DEFAULT_EPSILON,
) -> dict[tuple[str, str], list[ShiftMetrics]]:
    """Group the shifts of several matrices under a pooling key.

    Args:
        matrices: Performance matrices, one per (task, model)
        pooling: How to group shifts
        model_groups: Model -> group label, used by PoolingKey.GROUP (models
            without an entry form their own group)
        epsilon: Tie tolerance for shift labels

    Returns:
        (task, model_group) -> shifts, sorted by key; "*" marks a pooled level
    """
    groups = model_groups or {}
    pooled: dict[tuple[str, str], list[ShiftMetrics]] = defaultdict(list)
    for matrix in matrices:
        if pooling is PoolingKey.MODEL:
            key = (matrix.task, matrix.model)
        elif pooling is PoolingKey.GROUP:
            key = (matrix.task, groups.get(matrix.model, matrix.model))
        elif pooling is PoolingKey.POOLED:
            key = (POOLED_LABEL, POOLED_LABEL)
        else:
            key = (matrix.task, POOLED_LABEL)
        shifts, _ = compute_shifts(matrix, epsilon)
        pooled[key].extend(shifts)
    return dict(sorted(pooled.items()))


def characterize(
    shifts: Sequence[ShiftMetrics],
    task: str,
    model_group: str,
    epsilon: float = DEFAULT_EPSILON,
) -> CharacterizationRow:
    """Compute the characterization statistics of a group of shifts.

    Statistics undefined on the group (a constant series) are left empty and
    named in the row's diagnostics.

    Args:
        shifts: Shifts of the group
        task: Task label
        model_group: Group label
        epsilon: Tolerance for the positive-drop shares

    Raises:
        TooFewShiftsError: Fewer than three shifts
    """
    n = len(shifts)
    if n < MIN_SHIFTS:
        raise TooFewShiftsError(
            f"{task}/{model_group}: characterization needs >= 3 shifts, got {n}"
        )

    ss = np.array([s.ss for s in shifts])
    tt = np.array([s.tt for s in shifts])
    st = np.array([s.st for s in shifts])
    sd = np.array([s.sd for s in shifts])
    td = np.array([s.td for s in shifts])
    idd = np.array([s.idd for s in shifts])

    diagnostics: list[str] = []
    var_sd = sample_var(sd)
    var_td = sample_var(td)
    mad_st_ss = mean_abs_deviation(st, ss)
    mad_st_td = mean_abs_deviation(st, tt)

    def r2(drop: np.ndarray, field: str) -> Optional[float]:  # noqa: UP045
        # A constant drop is fit trivially; report it as absent instead of 1.0
        if np.ptp(drop) == 0.0:
            diagnostics.append(f"{field}: drop is constant")
            return None
        return _optional(lambda: r_squared(idd, drop), field, diagnostics)

    variance_gap_sign = _sign(var_sd - var_td)
    mad_gap_sign = _sign(mad_st_ss - mad_st_td)
    gap_signs_agree = variance_gap_sign == mad_gap_sign
    if not gap_signs_agree:
        diagnostics.append("sign of var_sd - var_td differs from sign of mean|SD| - mean|TD|")

    row = CharacterizationRow(
        task=task,
        model_group=model_group,
        n_shifts=n,
        mean_sd=float(np.mean(sd)),
        mean_td=float(np.mean(td)),
        var_sd=var_sd,
        var_td=var_td,
        std_sd=float(np.sqrt(var_sd)),
        std_td=float(np.sqrt(var_td)),
        worst_sd=float(np.max(sd)),
        worst_td=float(np.max(td)),
        corr_st_ss_pearson=_optional(lambda: pearson(st, ss), "corr_st_ss_pearson", diagnostics),
        corr_st_tt_pearson=_optional(lambda: pearson(st, tt), "corr_st_tt_pearson", diagnostics),
        corr_st_ss_spearman=_optional(
            lambda: spearman(st, ss), "corr_st_ss_spearman", diagnostics
        ),
        corr_st_tt_spearman=_optional(
            lambda: spearman(st, tt), "corr_st_tt_spearman", diagnostics
        ),
        r2_idd_sd=r2(sd, "r2_idd_sd"),
        r2_idd_td=r2(td, "r2_idd_td"),
        mad_st_ss=mad_st_ss,
        mad_st_td=mad_st_td,
        positive_sd_share=float(np.mean(sd > epsilon)),
        positive_td_share=float(np.mean(td > epsilon)),
        variance_gap_sign=variance_gap_sign,
        mad_gap_sign=mad_gap_sign,
        gap_signs_agree=gap_signs_agree,
        diagnostics=diagnostics,
    )
    for note in diagnostics:
        logger.warning(f"{task}/{model_group}: {note}")
    return row


def scenario_test(
    shifts: Sequence[ShiftMetrics],
    alpha: float = 0.05,
    m: int = 1,
    grouped: bool = False,
    task: str = POOLED_LABEL,
    model_group: str = POOLED_LABEL,
) -> ScenarioTestReport:
    """Test whether the six (SS, TT, ST) orderings are equally frequent.

    Args:
        shifts: Shifts of the group
        alpha: Family-wise significance level
        m: Number of comparisons for the Bonferroni correction
        grouped: Also test the four scenarios against (2, 2, 1, 1) / 6
        task: Task label recorded in the report
        model_group: Group label recorded in the report

    Raises:
        AllDegenerateError: No shift has a strict ordering
    """
    ordering_counts = dict.fromkeys(Ordering.strict(), 0)
    degenerate = 0
    for shift in shifts:
        if shift.ordering is Ordering.DEGENERATE:
            degenerate += 1
        else:
            ordering_counts[shift.ordering] += 1
    if degenerate == len(shifts):
        raise AllDegenerateError(f"{task}/{model_group}: every shift has a tied ordering")

    chi = chi_square_uniform(list(ordering_counts.values()), alpha, m)

    grouped_chi = None
    if grouped:
        scenario_counts = dict.fromkeys(GROUPED_SCENARIOS, 0)
        for ordering, count in ordering_counts.items():
            scenario_counts[scenario_for_ordering(ordering)] += count
        grouped_chi = chi_square_gof(
            [scenario_counts[s] for s in GROUPED_SCENARIOS], GROUPED_PROBS, alpha, m
        )

    boundary = sum(1 for shift in shifts if shift.scenario is Scenario.BOUNDARY)
    valid = len(shifts) - boundary
    proportions = dict.fromkeys(_VALID_SCENARIOS, 0.0)
    if valid:
        for shift in shifts:
            if shift.scenario is not Scenario.BOUNDARY:
                proportions[shift.scenario] += 1
        proportions = {scenario: count / valid for scenario, count in proportions.items()}

    logger.info(
        f"{task}/{model_group}: chi2={chi.statistic:.3f} p={chi.p_value:.4g} "
        f"reject={chi.reject} (alpha/m={chi.alpha_adjusted:.4g})"
    )
    return ScenarioTestReport(
        task=task,
        model_group=model_group,
        ordering_counts=ordering_counts,
        excluded_degenerate=degenerate,
        chi=chi,
        grouped_chi=grouped_chi,
        scenario_proportions=proportions,
        boundary_count=boundary,
    )


def _ranking_value(shift: ShiftMetrics, ranking_key: RankingKey) -> float:
    if ranking_key is RankingKey.BY_TD:
        return shift.td
    if ranking_key is RankingKey.BY_IDD:
        return shift.idd
    return shift.sd


def challenge_curve(
    shifts: Sequence[ShiftMetrics],
    ranking_key: RankingKey = RankingKey.BY_SD,
    ks: Optional[Sequence[int]] = None,  # noqa: UP045
) -> list[ChallengeCurvePoint]:
    """Average SD and TD over the k hardest shifts, for each k.

    Shifts are ranked descending by the ranking key, ties broken by
    (source, target).

    Args:
        shifts: Shifts of the group
        ranking_key: Value the shifts are ranked by
        ks: Sizes of the hardest subsets (default 1..n)

    Raises:
        KTooLargeError: Some k exceeds the number of shifts
    """
    n = len(shifts)
    sizes = list(ks) if ks is not None else list(range(1, n + 1))
    for k in sizes:
        if k < 1:
            raise ValueError(f"k must be positive, got {k}")
        if k > n:
            raise KTooLargeError(f"k={k} exceeds the {n} available shifts")

    ranked = sorted(
        shifts, key=lambda s: (-_ranking_value(s, ranking_key), s.source, s.target)
    )
    sd = np.array([s.sd for s in ranked])
    td = np.array([s.td for s in ranked])
    sd_cumulative = np.cumsum(sd)
    td_cumulative = np.cumsum(td)

    return [
        ChallengeCurvePoint(
            k=k,
            avg_sd_over_top_k=float(sd_cumulative[k - 1] / k),
            avg_td_over_top_k=float(td_cumulative[k - 1] / k),
            ranking_key=ranking_key,
        )
        for k in sizes
    ]


def build_challenge_curve(
    shifts: Sequence[ShiftMetrics],
    task: str,
    model_group: str,
    ranking_key: RankingKey = RankingKey.BY_SD,
    ks: Optional[Sequence[int]] = None,  # noqa: UP045
) -> ChallengeCurve:
    """Wrap challenge_curve points with their group labels."""
    return ChallengeCurve(
        task=task,
        model_group=model_group,
        ranking_key=ranking_key,
        points=challenge_curve(shifts, ranking_key, ks),
    )


def _lookup_divergence(
    divergences: Mapping[tuple[str, str], float], source: str, target: str
) -> float:
    if (source, target) in divergences:
        return divergences[(source, target)]
    if (target, source) in divergences:
        return divergences[(target, source)]
    raise MissingDivergenceError((source, target))


def predictor_correlations(
    shifts: Sequence[ShiftMetrics],
    divergences: Mapping[tuple[str, str], float],
    task: str = POOLED_LABEL,
    model_group: str = POOLED_LABEL,
) -> PredictorCorrelations:
    """Spearman correlations of JS divergence and IDD with SD and TD.

    Args:
        shifts: Shifts of one (task, model)
        divergences: Divergence per domain pair, looked up in either order

    Raises:
        MissingDivergenceError: A shift's pair has no divergence
        TooFewShiftsError: Fewer than three shifts
    """
    js = np.array([_lookup_divergence(divergences, s.source, s.target) for s in shifts])
    n = len(shifts)
    if n < MIN_SHIFTS:
        raise TooFewShiftsError(f"{task}/{model_group}: predictor correlations need >= 3 shifts")

    sd = np.array([s.sd for s in shifts])
    td = np.array([s.td for s in shifts])
    idd = np.array([s.idd for s in shifts])
    diagnostics: list[str] = []

    row = PredictorCorrelations(
        task=task,
        model_group=model_group,
        n_shifts=n,
        js_sd=_optional(lambda: spearman(js, sd), "js_sd", diagnostics),
        js_td=_optional(lambda: spearman(js, td), "js_td", diagnostics),
        idd_sd=_optional(lambda: spearman(idd, sd), "idd_sd", diagnostics),
        idd_td=_optional(lambda: spearman(idd, td), "idd_td", diagnostics),
        diagnostics=diagnostics,
    )
    for note in diagnostics:
        logger.warning(f"{task}/{model_group}: {note}")
    return row


def average_predictor_correlations(
    rows: Iterable[PredictorCorrelations],
) -> list[PredictorCorrelations]:
    """Average per-model predictor correlations within each task.

    Absent coefficients are left out of the mean; a coefficient absent for
    every model stays absent.
    """
    by_task: dict[str, list[PredictorCorrelations]] = defaultdict(list)
    for row in rows:
        by_task[row.task].append(row)

    averaged = []
    for task, task_rows in sorted(by_task.items()):
        values: dict[str, Optional[float]] = {}  # noqa: UP045
        diagnostics = []
        for field in ("js_sd", "js_td", "idd_sd", "idd_td"):
            present = [getattr(r, field) for r in task_rows if getattr(r, field) is not None]
            values[field] = float(np.mean(present)) if present else None
            if len(present) < len(task_rows):
                diagnostics.append(f"{field}: averaged over {len(present)}/{len(task_rows)} models")
        averaged.append(
            PredictorCorrelations(
                task=task,
                model_group=POOLED_LABEL,
                n_shifts=sum(r.n_shifts for r in task_rows),
                diagnostics=diagnostics,
                **values,
            )
        )
    return averaged
